#include <doctest.h>

#include <cmath>

#include "mimic/fill/predictors.hpp"
#include "mimic/util/errors.hpp"

using namespace mimic;
using fill::Joints6;
using fill::KeypointPredictor;
using fill::ObjectLocator;
using fill::PredictorKind;
using fill::fill_gaps;
using fill::train_predictor;

namespace {

std::vector<synth::Demonstration> make_demos(int count, double kp_noise, double dropout,
                                             std::uint64_t seed0) {
  synth::TaskConfig cfg;
  synth::NoiseConfig noise;
  noise.keypoint_noise_std = kp_noise;
  noise.dropout_prob = dropout;
  arm::HumanArmGeometry geom;
  synth::CameraModel cam;
  std::vector<synth::Demonstration> demos;
  for (int s = 0; s < count; ++s) {
    demos.push_back(generate_demonstration(cfg, noise, geom, cam, seed0 + std::uint64_t(s)));
  }
  return demos;
}

nn::TrainConfig light_train(long steps) {
  nn::TrainConfig tc;
  tc.base_lr = 0.0015;
  tc.max_steps = steps;
  tc.batch_size = 4;
  tc.decay_factor = 0.9;
  tc.decay_interval = 400;
  return tc;
}

// shared across test cases to keep the suite fast
const fill::TrainedPredictor& trained_keypoint_model() {
  static fill::TrainedPredictor model = [] {
    auto demos = make_demos(12, 0.0, 0.0, 300);
    return train_predictor(PredictorKind::Keypoints, demos, 3, light_train(700), 21);
  }();
  return model;
}

const fill::TrainedPredictor& trained_object_model() {
  static fill::TrainedPredictor model = [] {
    auto demos = make_demos(12, 0.0, 0.0, 300);
    return train_predictor(PredictorKind::ObjectLocation, demos, 3, light_train(600), 22);
  }();
  return model;
}

}  // namespace

TEST_CASE("architecture conformance: layer sizes match the contracts exactly") {
  const auto kp = fill::keypoint_predictor_spec(1);
  REQUIRE(kp.layers.size() == 5);
  CHECK(kp.layers[0].kind == nn::LayerKind::Recurrent);
  CHECK(kp.layers[0].in_dim == 36);
  CHECK(kp.layers[0].out_dim == 64);
  CHECK(kp.layers[1].out_dim == 64);
  CHECK(kp.layers[2].out_dim == 256);
  CHECK(kp.layers[3].out_dim == 64);
  CHECK(kp.layers[4].out_dim == 12);

  const auto ob = fill::object_locator_spec(1);
  REQUIRE(ob.layers.size() == 5);
  CHECK(ob.layers[0].in_dim == 9);
  CHECK(ob.layers[0].out_dim == 64);
  CHECK(ob.layers[1].out_dim == 32);
  CHECK(ob.layers[2].out_dim == 256);
  CHECK(ob.layers[3].out_dim == 64);
  CHECK(ob.layers[4].out_dim == 3);

  // wrong architecture is rejected at wrap time
  nn::ModelSpec tiny;
  tiny.layers = {nn::ModelSpec::dense(36, 12, nn::Activation::Linear)};
  const nn::Network wrong(tiny);
  CHECK_THROWS_AS(KeypointPredictor{wrong}, util::ValidationError);
}

TEST_CASE("predict_next: zero-weight model gives zero output for hip-centered input") {
  const nn::Network zero = nn::Network::zero_initialized(fill::keypoint_predictor_spec(0));
  KeypointPredictor predictor(zero);
  Joints6 frame;
  frame[0] = Eigen::Vector3d::Zero();  // hip at the origin: centering is a no-op
  frame[1] = Eigen::Vector3d(0.05, -0.2, 0.45);
  frame[2] = Eigen::Vector3d(0.1, -0.2, 0.2);
  frame[3] = Eigen::Vector3d(0.3, -0.1, 0.2);
  frame[4] = Eigen::Vector3d(0.35, -0.1, 0.2);
  frame[5] = Eigen::Vector3d(0.33, -0.05, 0.2);
  const auto out = predictor.predict_next(frame, frame);
  for (const auto& p : out) CHECK(p.norm() == 0.0);

  Joints6 bad = frame;
  bad[2][0] = std::numeric_limits<double>::quiet_NaN();
  predictor.reset();
  CHECK_THROWS_AS(predictor.predict_next(frame, bad), util::ValidationError);
}

TEST_CASE("predict: zero-weight object locator returns the previous location") {
  const nn::Network zero = nn::Network::zero_initialized(fill::object_locator_spec(0));
  ObjectLocator locator(zero);
  const Eigen::Vector3d obj(0.4, 0.1, 0.1);
  // zero network output means zero predicted delta
  CHECK((locator.predict(obj, Eigen::Vector3d(0.3, 0, 0.2), Eigen::Vector3d(0.35, 0, 0.2)) - obj)
            .norm() == 0.0);

  const Eigen::Vector3d sentinel(synth::kNegInf, synth::kNegInf, synth::kNegInf);
  CHECK_THROWS_AS(locator.predict(sentinel, obj, obj), util::ValidationError);
}

TEST_CASE("train_predictor: input validation") {
  auto demos = make_demos(2, 0.0, 0.0, 800);
  CHECK_THROWS_AS(
      train_predictor(PredictorKind::Keypoints, {demos[0]}, 1, light_train(10), 1),
      util::ValidationError);
  CHECK_THROWS_AS(train_predictor(PredictorKind::Keypoints, demos, 2, light_train(10), 1),
                  util::ValidationError);
}

TEST_CASE("train_predictor: report identities and training sanity") {
  const auto& kp = trained_keypoint_model();
  REQUIRE(kp.report.rows.size() == 12);
  for (const auto& row : kp.report.rows) {
    CHECK(row.m.mae <= row.m.rmse + 1e-12);
    CHECK(std::abs(row.m.rmse * row.m.rmse - row.m.mse) < 1e-12);
    if (row.m.r2) CHECK(*row.m.r2 <= 1.0);
  }
  // training loss trends down from the first window to the last
  REQUIRE(kp.training.loss_samples.size() >= 2);
  double first_window = 0, last_window = 0;
  int n = 0;
  for (const auto& [step, loss] : kp.training.loss_samples) {
    if (step < 100) {
      first_window += loss;
      ++n;
    }
  }
  first_window /= std::max(1, n);
  last_window = kp.training.final_loss;
  CHECK(last_window < first_window);

}

TEST_CASE("stationary sequences: held-out dwell frames stay put within tolerance") {
  // the pouring task is the one whose demonstrations contain stationary
  // stretches (the pour dwell); train on it and check those frames
  arm::HumanArmGeometry geom;
  synth::CameraModel cam;
  synth::NoiseConfig nz;
  nz.keypoint_noise_std = 0.0;
  synth::TaskConfig pouring;
  pouring.task = synth::Task::Pouring;
  pouring.objects_per_episode = 1;
  pouring.steps_min = 15;
  pouring.steps_max = 45;
  std::vector<synth::Demonstration> demos;
  for (int s = 0; s < 12; ++s) {
    demos.push_back(generate_demonstration(pouring, nz, geom, cam, 900 + std::uint64_t(s)));
  }
  const auto kp = train_predictor(PredictorKind::Keypoints, demos, 3, light_train(900), 21);

  double dwell_err = 0;
  int n = 0;
  for (std::size_t d = 9; d < 12; ++d) {
    const auto& dm = demos[d];
    KeypointPredictor pred(kp.net);
    for (std::size_t t = 1; t + 1 < dm.frames.size(); ++t) {
      const auto prev = fill::joints6_from_keypoints(*dm.frames[t - 1].keypoints);
      const auto cur = fill::joints6_from_keypoints(*dm.frames[t].keypoints);
      const auto out = pred.predict_next(prev, cur);
      if (dm.frames[t].action.norm() < 1e-12 && dm.frames[t - 1].action.norm() < 1e-12) {
        const auto next = fill::joints6_from_keypoints(*dm.frames[t + 1].keypoints);
        for (int j = 0; j < 4; ++j) {
          dwell_err += (out[std::size_t(j)] - next[std::size_t(j)]).norm();
          ++n;
        }
      }
    }
  }
  REQUIRE(n > 0);
  CHECK(dwell_err / n < 0.05);
}

TEST_CASE("trained object locator: stationary and grasp-following regimes") {
  const auto& ob = trained_object_model();
  CHECK(ob.report.overall_mae < 0.03);

  // held-out single-step predictions, split by regime
  auto demos = make_demos(3, 0.0, 0.0, 9300);
  double stat_err = 0, grasp_err = 0;
  int ns = 0, ng = 0;
  for (const auto& dm : demos) {
    ObjectLocator locator(ob.net);
    for (std::size_t t = 1; t < dm.frames.size(); ++t) {
      const auto& a = dm.frames[t - 1];
      const auto& b = dm.frames[t];
      if (!a.obj_loc.allFinite() || !b.obj_loc.allFinite()) continue;
      if ((b.obj_loc - a.obj_loc).norm() > 0.12) {  // object-of-interest handoff
        locator.reset();
        continue;
      }
      const Eigen::Vector3d pred = locator.predict(a.obj_loc, a.eef, b.eef);
      const double err = (pred - b.obj_loc).norm();
      if ((a.obj_loc - a.eef).norm() < 0.005) {
        grasp_err += err;
        ++ng;
      } else if ((a.obj_loc - a.eef).norm() > 0.10) {
        stat_err += err;
        ++ns;
      }
    }
  }
  REQUIRE(ns > 0);
  REQUIRE(ng > 0);
  CHECK(stat_err / ns < 0.03);   // ungrasped objects stay put
  CHECK(grasp_err / ng < 0.03);  // grasped objects follow the end-effector
}

TEST_CASE("fill_gaps: identity on complete streams and locality of single fills") {
  const auto& kp = trained_keypoint_model();
  const auto& ob = trained_object_model();
  auto demos = make_demos(1, 0.003, 0.0, 5100);
  const auto& clean = demos[0];

  const auto same = fill_gaps(clean, kp.net, ob.net);
  REQUIRE(same.frames.size() == clean.frames.size());
  for (std::size_t t = 0; t < clean.frames.size(); ++t) {
    CHECK((same.frames[t].eef - clean.frames[t].eef).norm() == 0.0);
    CHECK((same.frames[t].keypoints->wrist - clean.frames[t].keypoints->wrist).norm() == 0.0);
  }

  // drop exactly one mid-stream frame
  synth::Demonstration holed = clean;
  const std::size_t hole = holed.frames.size() / 2;
  holed.frames[hole].dropped = true;
  holed.frames[hole].keypoints.reset();
  const auto filled = fill_gaps(holed, kp.net, ob.net);
  for (std::size_t t = 0; t < clean.frames.size(); ++t) {
    CHECK_FALSE(filled.frames[t].dropped);
    REQUIRE(filled.frames[t].keypoints.has_value());
    const double diff =
        (filled.frames[t].keypoints->wrist - clean.frames[t].keypoints->wrist).norm();
    if (t == hole) {
      CHECK(diff > 0.0);
      CHECK(diff < 0.08);  // prediction lands near the true pose
    } else {
      CHECK(diff == 0.0);
    }
  }

  // idempotence on the completed stream
  const auto twice = fill_gaps(filled, kp.net, ob.net);
  for (std::size_t t = 0; t < filled.frames.size(); ++t) {
    CHECK((twice.frames[t].keypoints->wrist - filled.frames[t].keypoints->wrist).norm() == 0.0);
  }
}

TEST_CASE("fill_gaps: beats zero-order hold on a dropout stream") {
  const auto& kp = trained_keypoint_model();
  const auto& ob = trained_object_model();
  auto demos = make_demos(3, 0.0, 0.20, 6100);

  double model_mae = 0, zoh_mae = 0;
  int n = 0;
  for (const auto& noisy : demos) {
    // reference pass: same seed, no dropout -> identical true frames
    synth::TaskConfig cfg;
    synth::NoiseConfig noise;
    noise.keypoint_noise_std = 0.0;
    arm::HumanArmGeometry geom;
    synth::CameraModel cam;
    const auto truth = generate_demonstration(cfg, noise, geom, cam, noisy.seed);
    REQUIRE(truth.frames.size() == noisy.frames.size());

    const auto filled = fill_gaps(noisy, kp.net, ob.net);
    std::optional<Joints6> last_seen;
    for (std::size_t t = 0; t < noisy.frames.size(); ++t) {
      const Joints6 truth6 = fill::joints6_from_keypoints(*truth.frames[t].keypoints);
      if (noisy.frames[t].dropped) {
        REQUIRE(last_seen.has_value());
        const Joints6 filled6 = fill::joints6_from_keypoints(*filled.frames[t].keypoints);
        for (int j = 0; j < 4; ++j) {
          model_mae += (filled6[std::size_t(j)] - truth6[std::size_t(j)]).norm();
          zoh_mae += ((*last_seen)[std::size_t(j)] - truth6[std::size_t(j)]).norm();
          ++n;
        }
      } else {
        last_seen = fill::joints6_from_keypoints(*noisy.frames[t].keypoints);
      }
    }
  }
  REQUIRE(n > 0);
  model_mae /= n;
  zoh_mae /= n;
  CHECK(model_mae < zoh_mae);
}

TEST_CASE("fill_gaps: rejects streams whose first frames are dropped") {
  const auto& kp = trained_keypoint_model();
  const auto& ob = trained_object_model();
  auto demos = make_demos(1, 0.0, 0.0, 7100);
  synth::Demonstration bad = demos[0];
  bad.frames[1].dropped = true;
  bad.frames[1].keypoints.reset();
  CHECK_THROWS_AS(fill_gaps(bad, kp.net, ob.net), util::ValidationError);
}

TEST_CASE("fill_gaps: completes non-terminal object gaps and keeps the terminal tail") {
  const auto& kp = trained_keypoint_model();
  const auto& ob = trained_object_model();
  synth::TaskConfig cfg;
  synth::NoiseConfig noise;
  noise.detection_dropout_prob = 0.25;
  arm::HumanArmGeometry geom;
  synth::CameraModel cam;
  const auto demo = generate_demonstration(cfg, noise, geom, cam, 8100);

  int holes = 0;
  for (std::size_t t = 0; t + 1 < demo.frames.size(); ++t) {
    holes += demo.frames[t].obj_loc.allFinite() ? 0 : 1;
  }
  REQUIRE(holes > 0);

  const auto filled = fill_gaps(demo, kp.net, ob.net);
  std::size_t tail = filled.frames.size();
  while (tail > 0 && !filled.frames[tail - 1].obj_loc.allFinite()) --tail;
  for (std::size_t t = 1; t < tail; ++t) {
    if (filled.frames[t - 1].obj_loc.allFinite()) {
      CHECK(filled.frames[t].obj_loc.allFinite());
    }
  }
  CHECK_FALSE(filled.frames.back().obj_loc.allFinite());  // terminal sentinel preserved
}
