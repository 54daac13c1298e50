#include "mimic/fill/predictors.hpp"

#include <cmath>

#include "mimic/util/errors.hpp"
#include "mimic/util/io.hpp"

namespace mimic::fill {

using nn::Activation;
using nn::ModelSpec;
using nn::Network;
using nn::Tensor;
using util::ValidationError;

namespace {

const char* kJointNames[4] = {"hip", "shoulder", "elbow", "wrist"};
const char* kAxisNames[3] = {"x", "y", "z"};

void require_spec(const nn::Network& net, const ModelSpec& want, const char* what) {
  const auto& got = net.spec().layers;
  if (got.size() != want.layers.size()) {
    throw ValidationError(std::string(what) + ": wrong layer count");
  }
  for (std::size_t i = 0; i < got.size(); ++i) {
    if (got[i].kind != want.layers[i].kind || got[i].in_dim != want.layers[i].in_dim ||
        got[i].out_dim != want.layers[i].out_dim) {
      throw ValidationError(std::string(what) + ": layer " + std::to_string(i) +
                            " does not match the required architecture");
    }
  }
}

std::vector<double> pair_input(const Joints6& prev, const Joints6& cur) {
  const Eigen::Vector3d center = prev[0];  // hip of the older frame
  std::vector<double> x;
  x.reserve(36);
  for (const auto& p : prev) {
    for (int i = 0; i < 3; ++i) x.push_back(p[i] - center[i]);
  }
  for (const auto& p : cur) {
    for (int i = 0; i < 3; ++i) x.push_back(p[i] - center[i]);
  }
  return x;
}

// complete-frame index runs (keypoints with both fingers present)
std::vector<std::pair<std::size_t, std::size_t>> complete_runs(const synth::Demonstration& d) {
  std::vector<std::pair<std::size_t, std::size_t>> runs;
  std::size_t start = 0;
  bool open = false;
  for (std::size_t t = 0; t <= d.frames.size(); ++t) {
    const bool complete = t < d.frames.size() && d.frames[t].keypoints &&
                          d.frames[t].keypoints->index_finger && d.frames[t].keypoints->thumb;
    if (complete && !open) {
      start = t;
      open = true;
    } else if (!complete && open) {
      runs.emplace_back(start, t - 1);
      open = false;
    }
  }
  return runs;
}

// One run per continuously tracked object: breaks at sentinel frames and at
// object-of-interest handoffs (jumps far beyond one motion step).
constexpr double kTrackBreakJump = 0.12;

std::vector<std::pair<std::size_t, std::size_t>> finite_object_runs(
    const synth::Demonstration& d) {
  std::vector<std::pair<std::size_t, std::size_t>> runs;
  std::size_t start = 0;
  bool open = false;
  for (std::size_t t = 0; t <= d.frames.size(); ++t) {
    const bool finite = t < d.frames.size() && d.frames[t].obj_loc.allFinite();
    const bool jumped = finite && open && t > start &&
                        (d.frames[t].obj_loc - d.frames[t - 1].obj_loc).norm() > kTrackBreakJump;
    if (finite && !open) {
      start = t;
      open = true;
    } else if (open && (!finite || jumped)) {
      runs.emplace_back(start, t - 1);
      open = jumped;
      start = t;
    }
  }
  return runs;
}

nn::SeqDataset keypoint_dataset(const std::vector<synth::Demonstration>& demos) {
  nn::SeqDataset data;
  for (const auto& d : demos) {
    for (const auto& [a, b] : complete_runs(d)) {
      if (b - a + 1 < 3) continue;
      nn::SeqDataset::Sequence seq;
      for (std::size_t t = a + 1; t + 1 <= b; ++t) {
        const Joints6 prev = joints6_from_keypoints(*d.frames[t - 1].keypoints);
        const Joints6 cur = joints6_from_keypoints(*d.frames[t].keypoints);
        const Joints6 next = joints6_from_keypoints(*d.frames[t + 1].keypoints);
        seq.inputs.push_back(pair_input(prev, cur));
        std::vector<double> y;
        y.reserve(12);
        for (int j = 0; j < 4; ++j) {
          for (int i = 0; i < 3; ++i) y.push_back(next[std::size_t(j)][i] - prev[0][i]);
        }
        seq.targets.push_back(std::move(y));
      }
      if (!seq.inputs.empty()) data.sequences.push_back(std::move(seq));
    }
  }
  return data;
}

nn::SeqDataset object_dataset(const std::vector<synth::Demonstration>& demos) {
  nn::SeqDataset data;
  for (const auto& d : demos) {
    for (const auto& [a, b] : finite_object_runs(d)) {
      if (b - a + 1 < 2) continue;
      nn::SeqDataset::Sequence seq;
      for (std::size_t t = a + 1; t <= b; ++t) {
        const Eigen::Vector3d obj_prev = d.frames[t - 1].obj_loc;
        const Eigen::Vector3d eef_prev = d.frames[t - 1].eef;
        const Eigen::Vector3d eef_cur = d.frames[t].eef;
        std::vector<double> x(9, 0.0);
        for (int i = 0; i < 3; ++i) {
          x[std::size_t(3 + i)] = eef_prev[i] - obj_prev[i];
          x[std::size_t(6 + i)] = eef_cur[i] - obj_prev[i];
        }
        seq.inputs.push_back(std::move(x));
        std::vector<double> y(3);
        for (int i = 0; i < 3; ++i) y[std::size_t(i)] = d.frames[t].obj_loc[i] - obj_prev[i];
        seq.targets.push_back(std::move(y));
      }
      if (!seq.inputs.empty()) data.sequences.push_back(std::move(seq));
    }
  }
  return data;
}

PredictorReport build_report(const std::vector<std::string>& series_names,
                             const std::vector<std::vector<double>>& preds,
                             const std::vector<std::vector<double>>& truths) {
  PredictorReport report;
  const std::size_t dims = series_names.size() * 3;
  std::vector<std::vector<double>> p(dims), t(dims);
  double abs3d = 0.0, sq = 0.0;
  for (std::size_t s = 0; s < preds.size(); ++s) {
    for (std::size_t k = 0; k < dims; ++k) {
      p[k].push_back(preds[s][k]);
      t[k].push_back(truths[s][k]);
      sq += (preds[s][k] - truths[s][k]) * (preds[s][k] - truths[s][k]);
    }
    for (std::size_t g = 0; g < series_names.size(); ++g) {
      Eigen::Vector3d d;
      for (int i = 0; i < 3; ++i) d[i] = preds[s][3 * g + std::size_t(i)] - truths[s][3 * g + std::size_t(i)];
      abs3d += d.norm();
    }
  }
  for (std::size_t g = 0; g < series_names.size(); ++g) {
    for (int i = 0; i < 3; ++i) {
      PredictorReport::Row row;
      row.series = series_names[g];
      row.axis = kAxisNames[i];
      row.m = metrics::regression_metrics(p[3 * g + std::size_t(i)], t[3 * g + std::size_t(i)]);
      report.rows.push_back(std::move(row));
    }
  }
  report.samples = preds.size();
  if (!preds.empty()) {
    report.overall_mae = abs3d / double(preds.size() * series_names.size());
    report.overall_rmse = std::sqrt(sq / double(preds.size() * dims));
  }
  return report;
}

}  // namespace

Joints6 joints6_from_keypoints(const arm::ArmKeypoints& k) {
  if (!k.index_finger || !k.thumb) {
    throw ValidationError("joints6_from_keypoints: finger keypoints missing");
  }
  return {k.hip, k.shoulder, k.elbow, k.wrist, *k.index_finger, *k.thumb};
}

ModelSpec keypoint_predictor_spec(std::uint64_t seed) {
  ModelSpec spec;
  spec.layers = {ModelSpec::recurrent(36, 64), ModelSpec::recurrent(64, 64),
                 ModelSpec::dense(64, 256, Activation::Relu),
                 ModelSpec::dense(256, 64, Activation::Relu),
                 ModelSpec::dense(64, 12, Activation::Linear)};
  spec.seed = seed;
  return spec;
}

ModelSpec object_locator_spec(std::uint64_t seed) {
  ModelSpec spec;
  spec.layers = {ModelSpec::recurrent(9, 64), ModelSpec::recurrent(64, 32),
                 ModelSpec::dense(32, 256, Activation::Relu),
                 ModelSpec::dense(256, 64, Activation::Relu),
                 ModelSpec::dense(64, 3, Activation::Linear)};
  spec.seed = seed;
  return spec;
}

KeypointPredictor::KeypointPredictor(const Network& net) : net_(net) {
  require_spec(net, keypoint_predictor_spec(0), "keypoint predictor");
  state_ = net_.initial_state();
}

void KeypointPredictor::reset() { state_ = net_.initial_state(); }

std::array<Eigen::Vector3d, 4> KeypointPredictor::predict_next(const Joints6& prev,
                                                               const Joints6& cur) {
  for (const auto& p : prev) {
    if (!p.allFinite()) throw ValidationError("predict_next: non-finite input keypoint");
  }
  for (const auto& p : cur) {
    if (!p.allFinite()) throw ValidationError("predict_next: non-finite input keypoint");
  }
  const Tensor out = net_.forward(Tensor::vector(pair_input(prev, cur)), &state_);
  const Eigen::Vector3d center = prev[0];
  std::array<Eigen::Vector3d, 4> joints;
  for (int j = 0; j < 4; ++j) {
    for (int i = 0; i < 3; ++i) joints[std::size_t(j)][i] = out[std::size_t(3 * j + i)] + center[i];
  }
  return joints;
}

ObjectLocator::ObjectLocator(const Network& net) : net_(net) {
  require_spec(net, object_locator_spec(0), "object locator");
  state_ = net_.initial_state();
}

void ObjectLocator::reset() { state_ = net_.initial_state(); }

Eigen::Vector3d ObjectLocator::predict(const Eigen::Vector3d& obj_prev,
                                       const Eigen::Vector3d& eef_prev,
                                       const Eigen::Vector3d& eef_cur) {
  if (!obj_prev.allFinite()) {
    throw ValidationError("object locator: previous location is the unknown sentinel");
  }
  std::vector<double> x(9, 0.0);
  for (int i = 0; i < 3; ++i) {
    x[std::size_t(3 + i)] = eef_prev[i] - obj_prev[i];
    x[std::size_t(6 + i)] = eef_cur[i] - obj_prev[i];
  }
  const Tensor out = net_.forward(Tensor::vector(std::move(x)), &state_);
  return obj_prev + Eigen::Vector3d(out[0], out[1], out[2]);
}

PredictorReport evaluate_predictor(PredictorKind kind, const Network& net,
                                   const std::vector<synth::Demonstration>& eval_demos) {
  std::vector<std::vector<double>> preds, truths;
  if (kind == PredictorKind::Keypoints) {
    KeypointPredictor predictor(net);
    for (const auto& d : eval_demos) {
      for (const auto& [a, b] : complete_runs(d)) {
        if (b - a + 1 < 3) continue;
        predictor.reset();
        for (std::size_t t = a + 1; t + 1 <= b; ++t) {
          const auto pred =
              predictor.predict_next(joints6_from_keypoints(*d.frames[t - 1].keypoints),
                                     joints6_from_keypoints(*d.frames[t].keypoints));
          const Joints6 next = joints6_from_keypoints(*d.frames[t + 1].keypoints);
          std::vector<double> p, y;
          for (int j = 0; j < 4; ++j) {
            for (int i = 0; i < 3; ++i) {
              p.push_back(pred[std::size_t(j)][i]);
              y.push_back(next[std::size_t(j)][i]);
            }
          }
          preds.push_back(std::move(p));
          truths.push_back(std::move(y));
        }
      }
    }
    return build_report({kJointNames[0], kJointNames[1], kJointNames[2], kJointNames[3]},
                        preds, truths);
  }

  ObjectLocator locator(net);
  for (const auto& d : eval_demos) {
    for (const auto& [a, b] : finite_object_runs(d)) {
      if (b - a + 1 < 2) continue;
      locator.reset();
      for (std::size_t t = a + 1; t <= b; ++t) {
        const Eigen::Vector3d pred =
            locator.predict(d.frames[t - 1].obj_loc, d.frames[t - 1].eef, d.frames[t].eef);
        preds.push_back({pred.x(), pred.y(), pred.z()});
        truths.push_back(
            {d.frames[t].obj_loc.x(), d.frames[t].obj_loc.y(), d.frames[t].obj_loc.z()});
      }
    }
  }
  return build_report({"object"}, preds, truths);
}

TrainedPredictor train_predictor(PredictorKind kind,
                                 const std::vector<synth::Demonstration>& demos,
                                 std::size_t eval_count, const nn::TrainConfig& cfg,
                                 std::uint64_t seed) {
  if (demos.size() < 2) {
    throw ValidationError("train_predictor: need at least 2 demonstrations");
  }
  if (eval_count == 0 || eval_count >= demos.size()) {
    throw ValidationError("train_predictor: eval split must leave data on both sides");
  }
  const std::vector<synth::Demonstration> train(demos.begin(),
                                                demos.end() - std::ptrdiff_t(eval_count));
  const std::vector<synth::Demonstration> eval(demos.end() - std::ptrdiff_t(eval_count),
                                               demos.end());

  const nn::SeqDataset data =
      kind == PredictorKind::Keypoints ? keypoint_dataset(train) : object_dataset(train);
  if (data.sequences.empty()) {
    throw ValidationError("train_predictor: no usable frames in the training demonstrations");
  }
  Network net(kind == PredictorKind::Keypoints ? keypoint_predictor_spec(seed)
                                               : object_locator_spec(seed));
  TrainedPredictor out{std::move(net), {}, {}};
  out.training = train_sequences(out.net, data, cfg, util::derive_seed(seed, 0xF177));
  out.report = evaluate_predictor(kind, out.net, eval);
  return out;
}

synth::Demonstration fill_gaps(const synth::Demonstration& stream, const Network& keypoint_net,
                               const Network& object_net) {
  if (stream.frames.size() < 2) {
    throw ValidationError("fill_gaps: stream needs at least 2 frames");
  }
  if (stream.frames[0].dropped || stream.frames[1].dropped) {
    throw ValidationError("fill_gaps: cannot bootstrap, the first two frames are dropped");
  }
  synth::Demonstration out = stream;

  // keypoints: chained one-step-ahead predictions over the stream
  KeypointPredictor predictor(keypoint_net);
  std::array<Eigen::Vector3d, 4> next_pred{};
  bool have_pred = false;
  for (std::size_t t = 0; t < out.frames.size(); ++t) {
    auto& frame = out.frames[t];
    if (frame.dropped) {
      if (!have_pred) throw ValidationError("fill_gaps: dropped frame before any prediction");
      arm::ArmKeypoints filled;
      filled.hip = next_pred[0];
      filled.shoulder = next_pred[1];
      filled.elbow = next_pred[2];
      filled.wrist = next_pred[3];
      // the hand follows the wrist rigidly
      const auto& prev = *out.frames[t - 1].keypoints;
      const Eigen::Vector3d shift = filled.wrist - prev.wrist;
      if (prev.index_finger) filled.index_finger = *prev.index_finger + shift;
      if (prev.thumb) filled.thumb = *prev.thumb + shift;
      frame.keypoints = filled;
      frame.dropped = false;
    }
    if (t >= 1) {
      next_pred = predictor.predict_next(joints6_from_keypoints(*out.frames[t - 1].keypoints),
                                         joints6_from_keypoints(*out.frames[t].keypoints));
      have_pred = true;
    }
  }

  // object stream: fill sentinel gaps that are not the terminal tail
  std::size_t tail = out.frames.size();
  while (tail > 0 && !out.frames[tail - 1].obj_loc.allFinite()) --tail;
  ObjectLocator locator(object_net);
  for (std::size_t t = 1; t < tail; ++t) {
    auto& frame = out.frames[t];
    const auto& prev = out.frames[t - 1];
    if (!prev.obj_loc.allFinite()) continue;  // cannot bootstrap this gap
    if (!frame.obj_loc.allFinite()) {
      frame.obj_loc = locator.predict(prev.obj_loc, prev.eef, frame.eef);
      frame.obj_label = prev.obj_label;
    } else {
      locator.predict(prev.obj_loc, prev.eef, frame.eef);  // advance the stream state
    }
  }
  return out;
}

}  // namespace mimic::fill
