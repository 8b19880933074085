#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mrgnn/error.hpp"
#include "mrgnn/pipeline.hpp"

namespace mrgnn {

struct GraphSource {
  // Either generate a random d-regular graph or load an edge list.
  std::size_t n = 0;
  std::size_t d = 0;
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> path;
};

struct ExperimentConfig {
  PipelineConfig pipeline;
  GraphSource graph;
  std::vector<Variant> variants{Variant::RGnn, Variant::MrGnn, Variant::MrGnnAm};
  std::filesystem::path output = "out";
  std::optional<std::filesystem::path> hierarchy;  ///< precomputed Louvain levels
  std::size_t scatter_nodes = 200;
};

/// Thrown with every validation problem found, one per line.
struct ConfigError : InvalidInput {
  explicit ConfigError(std::vector<std::string> problems);
  std::vector<std::string> problems;
};

/// Parses the JSON experiment file. Unknown keys and bad values are all
/// collected before throwing ConfigError.
ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Checks cross-field constraints (graph source present, parity, ...).
void validate(const ExperimentConfig& cfg);

}  // namespace mrgnn
