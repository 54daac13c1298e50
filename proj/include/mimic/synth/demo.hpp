#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mimic/arm/human_arm.hpp"
#include "mimic/synth/camera.hpp"
#include "mimic/synth/scene.hpp"

namespace mimic::synth {

struct NoiseConfig {
  double keypoint_noise_std = 0.005;  // meters, per coordinate
  double dropout_prob = 0.0;          // chance a frame loses its keypoints
  double detection_dropout_prob = 0.0;  // chance a frame loses all detections
  double pixel_noise_std = 1.0;       // detector centroid jitter, pixels
  double depth_noise_std_mm = 3.0;
  double conf_known_lo = 0.80, conf_known_hi = 0.98;      // obvious, pre-reveal
  double conf_unknown_lo = 0.55, conf_unknown_hi = 0.70;  // localized, unclassified
  double conf_revealed_lo = 0.93, conf_revealed_hi = 0.98;
};

struct DemoFrame {
  Eigen::Vector3d eef = Eigen::Vector3d::Zero();
  Eigen::Vector3d action = Eigen::Vector3d::Zero();  // next eef minus this one
  bool dropped = false;
  std::optional<arm::ArmKeypoints> keypoints;  // absent iff dropped
  std::vector<Detection> detections;
  Label obj_label = Label::Unknown;  // selected object of interest
  Eigen::Vector3d obj_loc{kNegInf, kNegInf, kNegInf};
  bool tilt = false;  // pouring in progress
};

struct Demonstration {
  std::vector<DemoFrame> frames;  // last frame is terminal, zero action
  double dt = 0.1;
  Task task = Task::Sorting;
  std::uint64_t seed = 0;
  NoiseConfig noise;

  std::size_t step_count() const { return frames.empty() ? 0 : frames.size() - 1; }
};

// Runs the scripted expert on a seeded random scene, records the stream as the
// perception stack would see it (noisy keypoints from the tracking human arm,
// noisy detections through the camera model, object-of-interest selection) and
// retries with derived sub-seeds until the episode length lands in the
// configured window. Deterministic given (cfg, noise, seed).
Demonstration generate_demonstration(const TaskConfig& cfg, const NoiseConfig& noise,
                                     const arm::HumanArmGeometry& arm_geom,
                                     const CameraModel& cam, std::uint64_t seed);

// detection synthesis for one frame (exposed for tests)
std::vector<Detection> synthesize_detections(const SceneState& scene, const CameraModel& cam,
                                             const NoiseConfig& noise, util::Rng& rng);

void save_demonstration_jsonl(const std::string& path, const Demonstration& demo);
Demonstration load_demonstration_jsonl(const std::string& path);

}  // namespace mimic::synth
