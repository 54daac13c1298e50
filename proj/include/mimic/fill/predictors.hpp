#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "mimic/metrics/metrics.hpp"
#include "mimic/nn/trainer.hpp"
#include "mimic/synth/demo.hpp"

namespace mimic::fill {

// joint order used for the 36-dim predictor input
using Joints6 = std::array<Eigen::Vector3d, 6>;  // hip, shoulder, elbow, wrist, index, thumb

Joints6 joints6_from_keypoints(const arm::ArmKeypoints& k);  // throws if fingers missing

// recurrent(64), recurrent(64), dense(256 relu), dense(64 relu), dense(12)
nn::ModelSpec keypoint_predictor_spec(std::uint64_t seed);
// recurrent(64), recurrent(32), dense(256 relu), dense(64 relu), dense(3)
nn::ModelSpec object_locator_spec(std::uint64_t seed);

// Streaming one-step-ahead pose predictor. Consumes consecutive frame pairs;
// the hidden state persists across a stream and resets only on reset().
// Inputs are centered on the hip of the older frame internally.
class KeypointPredictor {
 public:
  explicit KeypointPredictor(const nn::Network& net);  // validates dimensions
  void reset();
  // prediction of {hip, shoulder, elbow, wrist} for the frame after `cur`
  std::array<Eigen::Vector3d, 4> predict_next(const Joints6& prev, const Joints6& cur);

 private:
  const nn::Network& net_;
  nn::NetState state_;
};

// Streaming object tracker: estimates the current object location from its
// previous location and the end-effector motion. Throws on sentinel input.
class ObjectLocator {
 public:
  explicit ObjectLocator(const nn::Network& net);
  void reset();
  Eigen::Vector3d predict(const Eigen::Vector3d& obj_prev, const Eigen::Vector3d& eef_prev,
                          const Eigen::Vector3d& eef_cur);

 private:
  const nn::Network& net_;
  nn::NetState state_;
};

using PredictorReport = metrics::EvalReport;

enum class PredictorKind { Keypoints, ObjectLocation };

struct TrainedPredictor {
  nn::Network net;
  PredictorReport report;  // held-out evaluation
  nn::TrainRunReport training;
};

// Splits demos into train/eval (the last eval_count demos are held out),
// builds streaming sequence datasets and trains with BPTT. Throws when fewer
// than 2 demonstrations or no usable frames are available.
TrainedPredictor train_predictor(PredictorKind kind,
                                 const std::vector<synth::Demonstration>& demos,
                                 std::size_t eval_count, const nn::TrainConfig& cfg,
                                 std::uint64_t seed);

// held-out evaluation alone (used by the CLI on loaded checkpoints)
PredictorReport evaluate_predictor(PredictorKind kind, const nn::Network& net,
                                   const std::vector<synth::Demonstration>& eval_demos);

// Replaces every dropped keypoint frame with the chained model prediction
// (fingers follow the predicted wrist rigidly) and fills non-terminal
// detection gaps with object-locator estimates. The first two frames must be
// complete. Complete streams pass through untouched.
synth::Demonstration fill_gaps(const synth::Demonstration& stream,
                               const nn::Network& keypoint_net,
                               const nn::Network& object_net);

}  // namespace mimic::fill
