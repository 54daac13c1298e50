#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace mimic::metrics {

// Fixed-rate joint-space trajectory; the smoothness metric is defined on a
// 100 ms grid, other rates are linearly resampled first.
struct JointTrajectory {
  std::vector<std::vector<double>> frames;
  double dt = 0.1;

  void validate() const;  // uniform joint count, dt > 0
};

constexpr double kJerkinessDt = 0.1;

JointTrajectory resample_to_dt(const JointTrajectory& traj, double target_dt);

// Summed absolute per-joint angular movement between consecutive 100 ms
// samples, in degrees. Throws on trajectories with fewer than 2 frames.
double jerkiness_deg(const JointTrajectory& traj);

// Total end-effector path length in meters. Throws on fewer than 2 points.
double displacement_m(const std::vector<Eigen::Vector3d>& eef_path);

// (frames - 1) * dt
double task_time_s(const JointTrajectory& traj);

struct RegressionMetrics {
  double mse = 0.0;
  double rmse = 0.0;
  double mae = 0.0;
  std::optional<double> r2;  // absent when target variance is zero
};

RegressionMetrics regression_metrics(const std::vector<double>& pred,
                                     const std::vector<double>& target);

struct Aggregate {
  double mean = 0.0;
  std::optional<double> stddev;  // sample (n-1) std; absent when n == 1
  std::size_t n = 0;
};

Aggregate aggregate(const std::vector<double>& values);

// per-series regression evaluation (one row per tracked quantity per axis)
struct EvalReport {
  struct Row {
    std::string series;
    std::string axis;
    RegressionMetrics m;
  };
  std::vector<Row> rows;
  double overall_mae = 0.0;   // mean 3D error across series groups
  double overall_rmse = 0.0;  // pooled per-coordinate rmse
  std::size_t samples = 0;
};

std::string eval_report_to_csv(const EvalReport& report);

}  // namespace mimic::metrics
