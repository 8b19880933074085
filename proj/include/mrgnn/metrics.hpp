#pragma once

#include <array>
#include <cstddef>

#include "mrgnn/gnn.hpp"

namespace mrgnn {

/// Relative loss difference in percent: (|loss_am| - |loss_mr|) / |loss_mr| * 100.
/// Positive means the guided variant reached the lower (more negative) loss.
double delta_rel(double loss_am, double loss_mr);

/// Relative time difference in percent: (time_am - time_mr) / time_mr * 100.
double delta_t(double time_am, double time_mr);

struct ShiftAnalysis {
  std::array<double, 3> proportions{0.0, 0.0, 0.0};  ///< early, mid, late
  std::array<std::size_t, 3> counts{0, 0, 0};
  std::size_t total_shifts = 0;
};

/// Counts nodes whose binarized assignment changes between consecutive
/// snapshots, bucketed into thirds of the epochs run.
ShiftAnalysis shift_analysis(const TrainTrace& trace, double tau = 0.5);

}  // namespace mrgnn
