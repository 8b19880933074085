#include "mrgnn/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "mrgnn/error.hpp"

namespace mrgnn {

double delta_rel(double loss_am, double loss_mr) {
  if (loss_mr == 0.0) throw InvalidInput("delta_rel: reference loss is zero");
  return (std::abs(loss_am) - std::abs(loss_mr)) / std::abs(loss_mr) * 100.0;
}

double delta_t(double time_am, double time_mr) {
  if (!(time_mr > 0.0)) throw InvalidInput("delta_t: reference time must be positive");
  return (time_am - time_mr) / time_mr * 100.0;
}

ShiftAnalysis shift_analysis(const TrainTrace& trace, double tau) {
  if (trace.snapshots.size() < 2 || trace.snapshot_epochs.size() != trace.snapshots.size())
    throw InvalidInput("shift analysis needs at least two snapshots");
  std::size_t total_epochs = std::max(trace.epochs_run, trace.snapshot_epochs.back());
  if (total_epochs == 0) total_epochs = 1;
  ShiftAnalysis out;
  for (std::size_t k = 1; k < trace.snapshots.size(); ++k) {
    const auto& prev = trace.snapshots[k - 1];
    const auto& cur = trace.snapshots[k];
    if (prev.size() != cur.size()) throw InvalidInput("snapshot sizes differ");
    std::size_t changed = 0;
    for (Eigen::Index i = 0; i < cur.size(); ++i) changed += (prev(i) >= tau) != (cur(i) >= tau);
    // The change happened by the last update before snapshot k.
    const std::size_t epoch = trace.snapshot_epochs[k] > 0 ? trace.snapshot_epochs[k] - 1 : 0;
    const std::size_t seg = std::min<std::size_t>(2, 3 * epoch / total_epochs);
    out.counts[seg] += changed;
    out.total_shifts += changed;
  }
  if (out.total_shifts > 0)
    for (int s = 0; s < 3; ++s)
      out.proportions[s] = static_cast<double>(out.counts[s]) / static_cast<double>(out.total_shifts);
  return out;
}

}  // namespace mrgnn
