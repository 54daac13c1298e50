#include "mimic/metrics/metrics.hpp"

#include <cmath>

#include "mimic/util/errors.hpp"
#include "mimic/util/io.hpp"

namespace mimic::metrics {

using util::ValidationError;

void JointTrajectory::validate() const {
  if (!(dt > 0.0)) throw ValidationError("joint trajectory: dt must be > 0");
  if (frames.empty()) throw ValidationError("joint trajectory: empty");
  const std::size_t n = frames.front().size();
  for (const auto& f : frames) {
    if (f.size() != n) throw ValidationError("joint trajectory: joint count varies");
  }
}

JointTrajectory resample_to_dt(const JointTrajectory& traj, double target_dt) {
  traj.validate();
  if (traj.dt == target_dt) return traj;
  const double duration = double(traj.frames.size() - 1) * traj.dt;
  const std::size_t n_out = std::size_t(std::floor(duration / target_dt + 1e-9)) + 1;
  JointTrajectory out;
  out.dt = target_dt;
  out.frames.reserve(n_out);
  const std::size_t joints = traj.frames.front().size();
  for (std::size_t k = 0; k < n_out; ++k) {
    const double t = double(k) * target_dt;
    const double pos = t / traj.dt;
    const std::size_t i0 = std::min<std::size_t>(std::size_t(pos), traj.frames.size() - 1);
    const std::size_t i1 = std::min<std::size_t>(i0 + 1, traj.frames.size() - 1);
    const double frac = pos - double(i0);
    std::vector<double> f(joints);
    for (std::size_t j = 0; j < joints; ++j) {
      f[j] = traj.frames[i0][j] * (1.0 - frac) + traj.frames[i1][j] * frac;
    }
    out.frames.push_back(std::move(f));
  }
  return out;
}

double jerkiness_deg(const JointTrajectory& traj) {
  traj.validate();
  if (traj.frames.size() < 2) {
    throw ValidationError("jerkiness: need at least 2 frames");
  }
  const JointTrajectory& t = traj.dt == kJerkinessDt ? traj : resample_to_dt(traj, kJerkinessDt);
  double sum_rad = 0.0;
  for (std::size_t k = 0; k + 1 < t.frames.size(); ++k) {
    for (std::size_t j = 0; j < t.frames[k].size(); ++j) {
      sum_rad += std::abs(t.frames[k + 1][j] - t.frames[k][j]);
    }
  }
  return sum_rad * 180.0 / M_PI;
}

double displacement_m(const std::vector<Eigen::Vector3d>& eef_path) {
  if (eef_path.size() < 2) throw ValidationError("displacement: need at least 2 points");
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < eef_path.size(); ++k) {
    total += (eef_path[k + 1] - eef_path[k]).norm();
  }
  return total;
}

double task_time_s(const JointTrajectory& traj) {
  traj.validate();
  return double(traj.frames.size() - 1) * traj.dt;
}

RegressionMetrics regression_metrics(const std::vector<double>& pred,
                                     const std::vector<double>& target) {
  if (pred.size() != target.size()) throw ValidationError("regression_metrics: length mismatch");
  if (pred.size() < 2) throw ValidationError("regression_metrics: need at least 2 samples");
  const double n = double(pred.size());
  double se = 0.0, ae = 0.0, t_sum = 0.0;
  for (std::size_t k = 0; k < pred.size(); ++k) {
    const double d = pred[k] - target[k];
    se += d * d;
    ae += std::abs(d);
    t_sum += target[k];
  }
  RegressionMetrics m;
  m.mse = se / n;
  m.rmse = std::sqrt(m.mse);
  m.mae = ae / n;
  const double t_mean = t_sum / n;
  double ss_tot = 0.0;
  for (double t : target) ss_tot += (t - t_mean) * (t - t_mean);
  if (ss_tot > 0.0) m.r2 = 1.0 - se / ss_tot;
  return m;
}

std::string eval_report_to_csv(const EvalReport& report) {
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"series", "axis", "mse", "rmse", "mae", "r2"});
  for (const auto& r : report.rows) {
    rows.push_back({r.series, r.axis, util::format_double(r.m.mse, 9),
                    util::format_double(r.m.rmse, 9), util::format_double(r.m.mae, 9),
                    r.m.r2 ? util::format_double(*r.m.r2, 9) : ""});
  }
  return util::to_csv(rows);
}

Aggregate aggregate(const std::vector<double>& values) {
  if (values.empty()) throw ValidationError("aggregate: empty input");
  Aggregate a;
  a.n = values.size();
  double sum = 0.0;
  for (double v : values) sum += v;
  a.mean = sum / double(a.n);
  if (a.n > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - a.mean) * (v - a.mean);
    a.stddev = std::sqrt(sq / double(a.n - 1));
  }
  return a;
}

}  // namespace mimic::metrics
