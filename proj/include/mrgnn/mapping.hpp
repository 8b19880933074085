#pragma once

#include <span>
#include <vector>

#include "mrgnn/gnn.hpp"
#include "mrgnn/louvain.hpp"

namespace mrgnn {

/// One resolution's contribution: a row per original node.
struct ResolutionFeatures {
  std::size_t level = 0;
  FeatureMatrix matrix;
};

/// Share of its community's embedding that original node v receives at `level`:
/// deg(v) / sum of degrees in the community, or 1/|community| when that sum is 0.
std::vector<double> distribution_coefficients(const Hierarchy& h, std::size_t level,
                                              std::span<const double> original_degrees);

/// Spreads level embeddings f_bar (one row per compressed node) over the original nodes.
ResolutionFeatures distribute(const Hierarchy& h, std::size_t level, const FeatureMatrix& f_bar,
                              std::span<const double> original_degrees);

/// Elementwise mean over resolutions.
FeatureMatrix aggregate(std::span<const ResolutionFeatures> parts);

/// Dense matrix text format: "rows cols" header, then one whitespace-separated row per line.
void save_matrix(const FeatureMatrix& m, const std::filesystem::path& path);
FeatureMatrix load_matrix(const std::filesystem::path& path);

}  // namespace mrgnn
