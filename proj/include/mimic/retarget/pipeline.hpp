#pragma once

#include <vector>

#include "mimic/arm/human_arm.hpp"
#include "mimic/metrics/metrics.hpp"
#include "mimic/nn/trainer.hpp"
#include "mimic/retarget/ik_refine.hpp"
#include "mimic/retarget/symbolic_map.hpp"
#include "mimic/synth/demo.hpp"

namespace mimic::retarget {

// dense(256 relu), dense(64 relu), dense(3): mapped joint angles -> eef
nn::ModelSpec restricted_fk_spec(std::uint64_t seed);
// dense(256 relu), dense(64 relu), dense(32 relu), dense(9): wrist -> hip, shoulder, elbow
nn::ModelSpec human_ik_spec(std::uint64_t seed);

struct TrainedFk {
  nn::Network net;
  metrics::EvalReport report;  // held-out, series "eef", axes x/y/z
  nn::TrainRunReport training;
};

// Samples mapped-joint angles uniformly within limits, labels them with the
// analytic restricted-FK oracle, holds out ~1/8 of the samples for the report.
TrainedFk train_restricted_fk(const arm::RobotSpec& robot, std::size_t n_samples,
                              const nn::TrainConfig& cfg, std::uint64_t seed);

struct TrainedHumanIk {
  nn::Network net;
  Eigen::Vector3d envelope_lo;  // axis-aligned box of training wrists
  Eigen::Vector3d envelope_hi;
  metrics::EvalReport report;  // held-out, series hip/shoulder/elbow
  nn::TrainRunReport training;
};

// Trains the wrist -> proximal-joints reconstruction on demonstration frames;
// the last eval_count demonstrations are held out for the report.
TrainedHumanIk train_human_ik(const std::vector<synth::Demonstration>& demos,
                              std::size_t eval_count, const nn::TrainConfig& cfg,
                              std::uint64_t seed);

struct HumanIkResult {
  Eigen::Vector3d hip, shoulder, elbow;
  bool extrapolated = false;  // wrist fell outside the training envelope
};

HumanIkResult human_ik(const nn::Network& net, const Eigen::Vector3d& wrist,
                       const Eigen::Vector3d& envelope_lo, const Eigen::Vector3d& envelope_hi);

// everything retarget_frame needs, models shared immutably
struct RetargetModels {
  const nn::Network* human_ik_net = nullptr;
  Eigen::Vector3d envelope_lo = Eigen::Vector3d::Zero();
  Eigen::Vector3d envelope_hi = Eigen::Vector3d::Zero();
  const nn::Network* fk_net = nullptr;
  const arm::RobotSpec* robot = nullptr;
  arm::HumanArmGeometry human_geom;
  SymbolicJointMap map;
};

struct FrameResult {
  arm::JointVector q_full;      // mapped joints refined, others at neutral
  std::array<double, 4> q4{};   // the refined mapped joints
  std::array<double, 4> q0{};   // the symbolic (or warm-started) initial guess
  double final_error = 0.0;
  long iters = 0;
  bool converged = false;
  bool extrapolated = false;
};

// wrist target -> human pose -> human angles -> symbolic map -> IK refinement
// -> full joint vector. Non-convergence is flagged, best-effort angles are
// still returned.
FrameResult retarget_frame(const RetargetModels& models, const Eigen::Vector3d& wrist_target,
                           const IkOptConfig& cfg,
                           const std::array<double, 4>* warm_q0 = nullptr);

struct TrajectoryResult {
  std::vector<FrameResult> frames;
  double convergence_rate = 0.0;
};

// Per-frame retargeting along an end-effector path. With warm_start, each
// frame's initial guess is the previous solution advanced by the symbolic-map
// delta between consecutive human angle vectors; disable for independent
// per-frame runs.
TrajectoryResult retarget_trajectory(const RetargetModels& models,
                                     const std::vector<Eigen::Vector3d>& eef_path,
                                     const IkOptConfig& cfg, bool warm_start = true);

}  // namespace mimic::retarget
