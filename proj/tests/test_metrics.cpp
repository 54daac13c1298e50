#include <doctest.h>

#include <cmath>

#include "mimic/metrics/metrics.hpp"
#include "mimic/util/errors.hpp"
#include "mimic/util/rng.hpp"

using namespace mimic;
using metrics::JointTrajectory;

TEST_CASE("jerkiness: constant trajectory is zero") {
  JointTrajectory t;
  t.frames = {{0.1, 0.2}, {0.1, 0.2}, {0.1, 0.2}};
  CHECK(metrics::jerkiness_deg(t) == 0.0);
}

TEST_CASE("jerkiness: one joint moving 10 degrees in one sample") {
  JointTrajectory t;
  const double ten_deg = 10.0 * M_PI / 180.0;
  t.frames = {{0.0, 0.5}, {ten_deg, 0.5}};
  CHECK(metrics::jerkiness_deg(t) == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("jerkiness: rejects single frames and resamples other rates") {
  JointTrajectory t;
  t.frames = {{0.0}};
  CHECK_THROWS_AS(metrics::jerkiness_deg(t), util::ValidationError);

  // 0.05 s sampling of a monotone ramp has the same total variation at 0.1 s
  JointTrajectory fine;
  fine.dt = 0.05;
  for (int k = 0; k <= 20; ++k) fine.frames.push_back({0.01 * k});
  JointTrajectory coarse;
  coarse.dt = 0.1;
  for (int k = 0; k <= 10; ++k) coarse.frames.push_back({0.02 * k});
  CHECK(metrics::jerkiness_deg(fine) ==
        doctest::Approx(metrics::jerkiness_deg(coarse)).epsilon(1e-9));
}

TEST_CASE("jerkiness: additive over concatenation sharing a boundary frame") {
  util::Rng rng(31);
  JointTrajectory a, b;
  for (int k = 0; k < 6; ++k) a.frames.push_back({rng.normal(), rng.normal()});
  b.frames.push_back(a.frames.back());
  for (int k = 0; k < 5; ++k) b.frames.push_back({rng.normal(), rng.normal()});
  JointTrajectory joined;
  joined.frames = a.frames;
  joined.frames.insert(joined.frames.end(), b.frames.begin() + 1, b.frames.end());
  CHECK(metrics::jerkiness_deg(joined) ==
        doctest::Approx(metrics::jerkiness_deg(a) + metrics::jerkiness_deg(b)).epsilon(1e-12));
}

TEST_CASE("displacement: basic sums and the triangle-inequality bound") {
  using Eigen::Vector3d;
  CHECK(metrics::displacement_m({Vector3d(0, 0, 0), Vector3d(1, 0, 0)}) == doctest::Approx(1.0));
  // closed square loop of side 0.5
  std::vector<Eigen::Vector3d> square = {
      {0, 0, 0}, {0.5, 0, 0}, {0.5, 0.5, 0}, {0, 0.5, 0}, {0, 0, 0}};
  CHECK(metrics::displacement_m(square) == doctest::Approx(2.0));
  CHECK_THROWS_AS(metrics::displacement_m({Vector3d(0, 0, 0)}), util::ValidationError);

  util::Rng rng(17);
  std::vector<Eigen::Vector3d> path;
  for (int k = 0; k < 12; ++k) path.emplace_back(rng.normal(), rng.normal(), rng.normal());
  CHECK(metrics::displacement_m(path) >= (path.back() - path.front()).norm() - 1e-12);
}

TEST_CASE("metrics: invariant to rigid translation of the scene") {
  util::Rng rng(23);
  JointTrajectory t;
  std::vector<Eigen::Vector3d> path;
  for (int k = 0; k < 8; ++k) {
    t.frames.push_back({rng.normal(), rng.normal(), rng.normal()});
    path.emplace_back(rng.normal(), rng.normal(), rng.normal());
  }
  const Eigen::Vector3d shift(1.5, -2.0, 0.25);
  std::vector<Eigen::Vector3d> shifted;
  for (const auto& p : path) shifted.push_back(p + shift);
  CHECK(metrics::displacement_m(shifted) == doctest::Approx(metrics::displacement_m(path)));
}

TEST_CASE("task_time: frame count times dt") {
  JointTrajectory t;
  t.frames.assign(151, {0.0});
  CHECK(metrics::task_time_s(t) == doctest::Approx(15.0));
}

TEST_CASE("regression_metrics: exact cases and identities") {
  std::vector<double> target = {1, 2, 3, 4};

  auto perfect = metrics::regression_metrics(target, target);
  CHECK(perfect.mse == 0.0);
  CHECK(perfect.rmse == 0.0);
  CHECK(perfect.mae == 0.0);
  REQUIRE(perfect.r2.has_value());
  CHECK(*perfect.r2 == doctest::Approx(1.0));

  std::vector<double> off = {2, 3, 4, 5};
  auto unit = metrics::regression_metrics(off, target);
  CHECK(unit.mse == doctest::Approx(1.0));
  CHECK(unit.rmse == doctest::Approx(1.0));
  CHECK(unit.mae == doctest::Approx(1.0));

  std::vector<double> mean_pred(4, 2.5);
  auto base = metrics::regression_metrics(mean_pred, target);
  REQUIRE(base.r2.has_value());
  CHECK(*base.r2 == doctest::Approx(0.0));

  std::vector<double> flat_target(4, 7.0);
  auto degenerate = metrics::regression_metrics(mean_pred, flat_target);
  CHECK_FALSE(degenerate.r2.has_value());

  util::Rng rng(41);
  std::vector<double> p(50), q(50);
  for (auto& v : p) v = rng.normal();
  for (auto& v : q) v = rng.normal();
  auto m = metrics::regression_metrics(p, q);
  CHECK(m.mae <= m.rmse + 1e-12);
  CHECK(std::abs(m.rmse * m.rmse - m.mse) < 1e-12);
}

TEST_CASE("aggregate: sample standard deviation with n-1 denominator") {
  auto single = metrics::aggregate({4.2});
  CHECK(single.mean == 4.2);
  CHECK_FALSE(single.stddev.has_value());
  CHECK(single.n == 1);

  auto pair = metrics::aggregate({1.0, 3.0});
  CHECK(pair.mean == doctest::Approx(2.0));
  REQUIRE(pair.stddev.has_value());
  CHECK(*pair.stddev == doctest::Approx(std::sqrt(2.0)));

  // independent spreadsheet-style recomputation on 40 values
  util::Rng rng(59);
  std::vector<double> vals;
  for (int k = 0; k < 40; ++k) vals.push_back(rng.uniform(0, 10));
  auto agg = metrics::aggregate(vals);
  double sum = 0.0;
  for (double v : vals) sum += v;
  const double mean = sum / 40.0;
  double sq = 0.0;
  for (double v : vals) sq += (v - mean) * (v - mean);
  CHECK(agg.mean == doctest::Approx(mean).epsilon(1e-12));
  CHECK(*agg.stddev == doctest::Approx(std::sqrt(sq / 39.0)).epsilon(1e-12));
}
