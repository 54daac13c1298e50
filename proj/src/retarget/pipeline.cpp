#include "mimic/retarget/pipeline.hpp"

#include <cmath>

#include "mimic/util/errors.hpp"
#include "mimic/util/rng.hpp"

namespace mimic::retarget {

using nn::Activation;
using nn::ModelSpec;
using nn::Network;
using util::ValidationError;

namespace {

const char* kAxis[3] = {"x", "y", "z"};

metrics::EvalReport series_report(const std::vector<std::string>& series,
                                  const std::vector<std::vector<double>>& preds,
                                  const std::vector<std::vector<double>>& truths) {
  metrics::EvalReport report;
  const std::size_t dims = series.size() * 3;
  std::vector<std::vector<double>> p(dims), t(dims);
  double abs3d = 0.0, sq = 0.0;
  for (std::size_t s = 0; s < preds.size(); ++s) {
    for (std::size_t k = 0; k < dims; ++k) {
      p[k].push_back(preds[s][k]);
      t[k].push_back(truths[s][k]);
      sq += (preds[s][k] - truths[s][k]) * (preds[s][k] - truths[s][k]);
    }
    for (std::size_t g = 0; g < series.size(); ++g) {
      double d2 = 0.0;
      for (std::size_t i = 0; i < 3; ++i) {
        const double d = preds[s][3 * g + i] - truths[s][3 * g + i];
        d2 += d * d;
      }
      abs3d += std::sqrt(d2);
    }
  }
  for (std::size_t g = 0; g < series.size(); ++g) {
    for (std::size_t i = 0; i < 3; ++i) {
      metrics::EvalReport::Row row;
      row.series = series[g];
      row.axis = kAxis[i];
      row.m = metrics::regression_metrics(p[3 * g + i], t[3 * g + i]);
      report.rows.push_back(std::move(row));
    }
  }
  report.samples = preds.size();
  if (!preds.empty()) {
    report.overall_mae = abs3d / double(preds.size() * series.size());
    report.overall_rmse = std::sqrt(sq / double(preds.size() * dims));
  }
  return report;
}

}  // namespace

ModelSpec restricted_fk_spec(std::uint64_t seed) {
  ModelSpec spec;
  spec.layers = {ModelSpec::dense(4, 256, Activation::Relu),
                 ModelSpec::dense(256, 64, Activation::Relu),
                 ModelSpec::dense(64, 3, Activation::Linear)};
  spec.seed = seed;
  return spec;
}

ModelSpec human_ik_spec(std::uint64_t seed) {
  ModelSpec spec;
  spec.layers = {ModelSpec::dense(3, 256, Activation::Relu),
                 ModelSpec::dense(256, 64, Activation::Relu),
                 ModelSpec::dense(64, 32, Activation::Relu),
                 ModelSpec::dense(32, 9, Activation::Linear)};
  spec.seed = seed;
  return spec;
}

TrainedFk train_restricted_fk(const arm::RobotSpec& robot, std::size_t n_samples,
                              const nn::TrainConfig& cfg, std::uint64_t seed) {
  if (n_samples < 1000) {
    throw ValidationError("train_restricted_fk: need at least 1000 samples");
  }
  util::Rng rng(util::derive_seed(seed, 0xFC));
  const auto lo = robot.mapped_limit_lo();
  const auto hi = robot.mapped_limit_hi();

  nn::RowDataset train, eval;
  for (std::size_t i = 0; i < n_samples; ++i) {
    std::array<double, 4> q4{};
    for (std::size_t k = 0; k < 4; ++k) q4[k] = rng.uniform(lo[k], hi[k]);
    const Eigen::Vector3d p = restricted_fk_oracle(robot, q4);
    auto& dest = (i % 8 == 7) ? eval : train;
    dest.inputs.push_back({q4[0], q4[1], q4[2], q4[3]});
    dest.targets.push_back({p.x(), p.y(), p.z()});
  }

  TrainedFk out{Network(restricted_fk_spec(seed)), {}, {}};
  out.training = train_rows(out.net, train, cfg, util::derive_seed(seed, 0xF8));

  std::vector<std::vector<double>> preds;
  for (const auto& x : eval.inputs) {
    const nn::Tensor y = out.net.forward(nn::Tensor::vector(std::vector<double>(x)));
    preds.push_back(y.values);
  }
  out.report = series_report({"eef"}, preds, eval.targets);
  return out;
}

TrainedHumanIk train_human_ik(const std::vector<synth::Demonstration>& demos,
                              std::size_t eval_count, const nn::TrainConfig& cfg,
                              std::uint64_t seed) {
  if (demos.size() < 2 || eval_count == 0 || eval_count >= demos.size()) {
    throw ValidationError("train_human_ik: need >= 2 demonstrations and a nonempty split");
  }
  nn::RowDataset train, eval;
  Eigen::Vector3d lo(1e30, 1e30, 1e30), hi(-1e30, -1e30, -1e30);
  for (std::size_t d = 0; d < demos.size(); ++d) {
    const bool held_out = d + eval_count >= demos.size();
    for (const auto& f : demos[d].frames) {
      if (!f.keypoints) continue;
      const auto& k = *f.keypoints;
      auto& dest = held_out ? eval : train;
      dest.inputs.push_back({k.wrist.x(), k.wrist.y(), k.wrist.z()});
      dest.targets.push_back({k.hip.x(), k.hip.y(), k.hip.z(), k.shoulder.x(), k.shoulder.y(),
                              k.shoulder.z(), k.elbow.x(), k.elbow.y(), k.elbow.z()});
      if (!held_out) {
        lo = lo.cwiseMin(k.wrist);
        hi = hi.cwiseMax(k.wrist);
      }
    }
  }
  if (train.size() == 0 || eval.size() < 2) {
    throw ValidationError("train_human_ik: not enough usable frames");
  }

  TrainedHumanIk out{Network(human_ik_spec(seed)), lo, hi, {}, {}};
  out.training = train_rows(out.net, train, cfg, util::derive_seed(seed, 0x41));
  std::vector<std::vector<double>> preds;
  for (const auto& x : eval.inputs) {
    preds.push_back(out.net.forward(nn::Tensor::vector(std::vector<double>(x))).values);
  }
  out.report = series_report({"hip", "shoulder", "elbow"}, preds, eval.targets);
  return out;
}

HumanIkResult human_ik(const Network& net, const Eigen::Vector3d& wrist,
                       const Eigen::Vector3d& envelope_lo, const Eigen::Vector3d& envelope_hi) {
  if (!wrist.allFinite()) throw ValidationError("human_ik: non-finite wrist");
  if (net.input_dim() != 3 || net.output_dim() != 9) {
    throw ValidationError("human_ik: model must map 3 -> 9");
  }
  const nn::Tensor out = net.forward(nn::Tensor::vector({wrist.x(), wrist.y(), wrist.z()}));
  HumanIkResult r;
  r.hip = {out[0], out[1], out[2]};
  r.shoulder = {out[3], out[4], out[5]};
  r.elbow = {out[6], out[7], out[8]};
  constexpr double kMargin = 0.02;
  for (int i = 0; i < 3; ++i) {
    if (wrist[i] < envelope_lo[i] - kMargin || wrist[i] > envelope_hi[i] + kMargin) {
      r.extrapolated = true;
    }
  }
  return r;
}

FrameResult retarget_frame(const RetargetModels& models, const Eigen::Vector3d& wrist_target,
                           const IkOptConfig& cfg, const std::array<double, 4>* warm_q0) {
  const HumanIkResult pose =
      human_ik(*models.human_ik_net, wrist_target, models.envelope_lo, models.envelope_hi);
  arm::ArmKeypoints k;
  k.hip = pose.hip;
  k.shoulder = pose.shoulder;
  k.elbow = pose.elbow;
  k.wrist = wrist_target;
  const arm::HumanAngles human = joint_angles_from_keypoints(models.human_geom, k);
  const std::array<double, 4> symbolic = models.map.map(*models.robot, human);
  const std::array<double, 4> q0 = warm_q0 ? *warm_q0 : symbolic;

  const IkResult ik = cobot_ik_refine(*models.fk_net, *models.robot, q0, wrist_target, cfg);

  FrameResult out;
  out.q_full = models.robot->embed_mapped(ik.q);
  out.q4 = ik.q;
  out.q0 = q0;
  out.final_error = ik.final_error;
  out.iters = ik.iters;
  out.converged = ik.converged;
  out.extrapolated = pose.extrapolated;
  return out;
}

TrajectoryResult retarget_trajectory(const RetargetModels& models,
                                     const std::vector<Eigen::Vector3d>& eef_path,
                                     const IkOptConfig& cfg, bool warm_start) {
  if (eef_path.size() < 2) {
    throw ValidationError("retarget_trajectory: path needs at least 2 points");
  }
  TrajectoryResult out;
  out.frames.reserve(eef_path.size());
  std::array<double, 4> prev_symbolic{};
  const auto lo = models.robot->mapped_limit_lo();
  const auto hi = models.robot->mapped_limit_hi();

  for (std::size_t t = 0; t < eef_path.size(); ++t) {
    // symbolic initialization for this frame (also the base of the warm delta)
    const HumanIkResult pose = human_ik(*models.human_ik_net, eef_path[t], models.envelope_lo,
                                        models.envelope_hi);
    arm::ArmKeypoints k;
    k.hip = pose.hip;
    k.shoulder = pose.shoulder;
    k.elbow = pose.elbow;
    k.wrist = eef_path[t];
    const std::array<double, 4> symbolic =
        models.map.map(*models.robot, joint_angles_from_keypoints(models.human_geom, k));

    std::array<double, 4> q0 = symbolic;
    if (warm_start && t > 0) {
      for (std::size_t i = 0; i < 4; ++i) {
        q0[i] = std::clamp(out.frames.back().q4[i] + (symbolic[i] - prev_symbolic[i]), lo[i],
                           hi[i]);
      }
    }
    FrameResult frame = retarget_frame(models, eef_path[t], cfg, &q0);
    frame.extrapolated = frame.extrapolated || pose.extrapolated;
    out.frames.push_back(std::move(frame));
    prev_symbolic = symbolic;
  }
  std::size_t converged = 0;
  for (const auto& f : out.frames) converged += f.converged ? 1 : 0;
  out.convergence_rate = double(converged) / double(out.frames.size());
  return out;
}

}  // namespace mimic::retarget
