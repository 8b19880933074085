#include <doctest.h>

#include "mrgnn/error.hpp"
#include "mrgnn/metrics.hpp"

using namespace mrgnn;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

}  // namespace

TEST_CASE("relative differences") {
  CHECK(delta_rel(-110.0, -100.0) == doctest::Approx(10.0));
  CHECK(delta_rel(-90.0, -100.0) == doctest::Approx(-10.0));
  CHECK(delta_rel(5.0, -5.0) == doctest::Approx(0.0));
  CHECK_THROWS_AS(delta_rel(1.0, 0.0), InvalidInput);

  CHECK(delta_t(12.0, 10.0) == doctest::Approx(20.0));
  CHECK(delta_t(5.0, 10.0) == doctest::Approx(-50.0));
  CHECK_THROWS_AS(delta_t(1.0, 0.0), InvalidInput);
}

TEST_CASE("shifts are bucketed by the epoch they happened in") {
  TrainTrace t;
  t.epochs_run = 9;
  t.snapshot_epochs = {0, 3, 6, 9};
  t.snapshots = {vec({0.1, 0.1, 0.1, 0.1}), vec({0.9, 0.1, 0.1, 0.1}), vec({0.9, 0.9, 0.9, 0.1}),
                 vec({0.1, 0.9, 0.9, 0.9})};
  ShiftAnalysis s = shift_analysis(t);
  // Changes land in epochs 2, 5 and 8: one per third.
  CHECK(s.counts == std::array<std::size_t, 3>{1, 2, 2});
  CHECK(s.total_shifts == 5);
  CHECK(s.proportions[0] == doctest::Approx(0.2));
  CHECK(s.proportions[1] == doctest::Approx(0.4));
  CHECK(s.proportions[2] == doctest::Approx(0.4));
}

TEST_CASE("threshold decides what counts as a shift") {
  TrainTrace t;
  t.epochs_run = 2;
  t.snapshot_epochs = {0, 2};
  t.snapshots = {vec({0.4, 0.6}), vec({0.5, 0.7})};
  CHECK(shift_analysis(t).total_shifts == 1);
  CHECK(shift_analysis(t, 0.65).total_shifts == 1);
  CHECK(shift_analysis(t, 0.8).total_shifts == 0);
}

TEST_CASE("no shifts leaves proportions at zero") {
  TrainTrace t;
  t.epochs_run = 4;
  t.snapshot_epochs = {0, 2, 4};
  t.snapshots = {vec({0.9}), vec({0.8}), vec({0.7})};
  ShiftAnalysis s = shift_analysis(t);
  CHECK(s.total_shifts == 0);
  CHECK(s.proportions == std::array<double, 3>{0.0, 0.0, 0.0});
}

TEST_CASE("shift analysis input checks") {
  TrainTrace t;
  t.epochs_run = 1;
  t.snapshot_epochs = {0};
  t.snapshots = {vec({0.9})};
  CHECK_THROWS_AS(shift_analysis(t), InvalidInput);
  t.snapshot_epochs = {0, 1};
  t.snapshots = {vec({0.9}), vec({0.9, 0.1})};
  CHECK_THROWS_AS(shift_analysis(t), InvalidInput);
}

TEST_CASE("shift counts add up over many snapshots") {
  TrainTrace t;
  t.epochs_run = 300;
  for (std::size_t e = 0; e <= 300; e += 10) {
    t.snapshot_epochs.push_back(e);
    t.snapshots.push_back(vec({e % 20 ? 0.2 : 0.8, 0.5}));
  }
  ShiftAnalysis s = shift_analysis(t);
  CHECK(s.total_shifts == 30);
  CHECK(s.counts[0] + s.counts[1] + s.counts[2] == 30);
  CHECK(s.proportions[0] + s.proportions[1] + s.proportions[2] == doctest::Approx(1.0));
}
