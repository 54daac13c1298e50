#include "mimic/synth/demo.hpp"

#include <sstream>

#include <nlohmann/json.hpp>

#include "mimic/synth/expert.hpp"
#include "mimic/util/errors.hpp"
#include "mimic/util/io.hpp"

namespace mimic::synth {

using util::GenerationError;
using util::ValidationError;

namespace {

nlohmann::json vec3_to_json(const Eigen::Vector3d& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (int i = 0; i < 3; ++i) {
    if (v[i] == kNegInf) {
      arr.push_back("neg_inf");
    } else {
      arr.push_back(v[i]);
    }
  }
  return arr;
}

Eigen::Vector3d vec3_from_json(const nlohmann::json& arr) {
  Eigen::Vector3d v;
  for (int i = 0; i < 3; ++i) {
    const auto& cell = arr.at(std::size_t(i));
    if (cell.is_string()) {
      if (cell.get<std::string>() != "neg_inf") {
        throw ValidationError("vector cell: unknown sentinel '" + cell.get<std::string>() + "'");
      }
      v[i] = kNegInf;
    } else {
      v[i] = cell.get<double>();
    }
  }
  return v;
}

nlohmann::json keypoints_to_json(const arm::ArmKeypoints& k) {
  nlohmann::json j = {{"hip", vec3_to_json(k.hip)},
                      {"shoulder", vec3_to_json(k.shoulder)},
                      {"elbow", vec3_to_json(k.elbow)},
                      {"wrist", vec3_to_json(k.wrist)}};
  if (k.index_finger) j["index_finger"] = vec3_to_json(*k.index_finger);
  if (k.thumb) j["thumb"] = vec3_to_json(*k.thumb);
  return j;
}

arm::ArmKeypoints keypoints_from_json(const nlohmann::json& j) {
  arm::ArmKeypoints k;
  k.hip = vec3_from_json(j.at("hip"));
  k.shoulder = vec3_from_json(j.at("shoulder"));
  k.elbow = vec3_from_json(j.at("elbow"));
  k.wrist = vec3_from_json(j.at("wrist"));
  if (j.contains("index_finger")) k.index_finger = vec3_from_json(j.at("index_finger"));
  if (j.contains("thumb")) k.thumb = vec3_from_json(j.at("thumb"));
  return k;
}

nlohmann::json noise_to_json(const NoiseConfig& n) {
  return {{"keypoint_noise_std", n.keypoint_noise_std},
          {"dropout_prob", n.dropout_prob},
          {"detection_dropout_prob", n.detection_dropout_prob},
          {"pixel_noise_std", n.pixel_noise_std},
          {"depth_noise_std_mm", n.depth_noise_std_mm},
          {"conf_known", {n.conf_known_lo, n.conf_known_hi}},
          {"conf_unknown", {n.conf_unknown_lo, n.conf_unknown_hi}},
          {"conf_revealed", {n.conf_revealed_lo, n.conf_revealed_hi}}};
}

NoiseConfig noise_from_json(const nlohmann::json& j) {
  NoiseConfig n;
  n.keypoint_noise_std = j.at("keypoint_noise_std").get<double>();
  n.dropout_prob = j.at("dropout_prob").get<double>();
  n.detection_dropout_prob = j.value("detection_dropout_prob", 0.0);
  n.pixel_noise_std = j.at("pixel_noise_std").get<double>();
  n.depth_noise_std_mm = j.at("depth_noise_std_mm").get<double>();
  n.conf_known_lo = j.at("conf_known")[0].get<double>();
  n.conf_known_hi = j.at("conf_known")[1].get<double>();
  n.conf_unknown_lo = j.at("conf_unknown")[0].get<double>();
  n.conf_unknown_hi = j.at("conf_unknown")[1].get<double>();
  n.conf_revealed_lo = j.at("conf_revealed")[0].get<double>();
  n.conf_revealed_hi = j.at("conf_revealed")[1].get<double>();
  return n;
}

arm::ArmKeypoints noisy_keypoints(const arm::ArmKeypoints& clean, double std, util::Rng& rng) {
  auto jitter = [&](const Eigen::Vector3d& p) {
    return Eigen::Vector3d(p.x() + rng.normal(0, std), p.y() + rng.normal(0, std),
                           p.z() + rng.normal(0, std));
  };
  arm::ArmKeypoints k;
  k.hip = jitter(clean.hip);
  k.shoulder = jitter(clean.shoulder);
  k.elbow = jitter(clean.elbow);
  k.wrist = jitter(clean.wrist);
  if (clean.index_finger) k.index_finger = jitter(*clean.index_finger);
  if (clean.thumb) k.thumb = jitter(*clean.thumb);
  return k;
}

Demonstration run_episode(const TaskConfig& cfg, const NoiseConfig& noise,
                          const arm::HumanArmGeometry& arm_geom, const CameraModel& cam,
                          util::Rng& rng) {
  Demonstration demo;
  demo.task = cfg.task;
  demo.noise = noise;

  SceneState scene = initial_scene(cfg, rng);
  int frame_index = 0;
  while (true) {
    DemoFrame frame;
    frame.eef = scene.eef;
    const bool detections_lost =
        frame_index >= 2 && rng.uniform01() < noise.detection_dropout_prob;
    if (!detections_lost) {
      frame.detections = synthesize_detections(scene, cam, noise, rng);
    }
    std::tie(frame.obj_label, frame.obj_loc) =
        select_object_of_interest(frame.detections, scene.eef);

    // the demonstrating human's wrist rides on the end-effector path
    auto q = arm::solve_wrist(arm_geom, scene.eef);
    if (!q) {
      throw GenerationError("generate_demonstration: end-effector left the human arm's reach");
    }
    (*q)[3] = 0.25 * (*q)[2];  // natural wrist deviation coupled to elbow flexion
    const arm::ArmKeypoints clean = human_arm_fk(arm_geom, *q);
    frame.dropped = frame_index >= 2 && rng.uniform01() < noise.dropout_prob;
    if (!frame.dropped) {
      frame.keypoints = noisy_keypoints(clean, noise.keypoint_noise_std, rng);
    }

    if (scene.all_sorted()) {
      frame.action = Eigen::Vector3d::Zero();
      demo.frames.push_back(std::move(frame));
      break;
    }
    if (frame_index >= cfg.frame_budget) {
      throw GenerationError("generate_demonstration: frame budget exhausted before completion");
    }

    const Eigen::Vector3d action = scripted_expert(scene, cfg);
    const Eigen::Vector3d before = scene.eef;
    const bool was_unpoured = scene.grasped && !scene.objects[*scene.grasped].poured;
    scene_step(scene, action, cfg);
    frame.action = scene.eef - before;  // realized displacement, exact
    frame.tilt = cfg.task == Task::Pouring && was_unpoured &&
                 (scene.pour_counter > 0 ||
                  (scene.grasped && scene.objects[*scene.grasped].poured));
    demo.frames.push_back(std::move(frame));
    ++frame_index;
  }
  return demo;
}

}  // namespace

std::vector<Detection> synthesize_detections(const SceneState& scene, const CameraModel& cam,
                                             const NoiseConfig& noise, util::Rng& rng) {
  std::vector<Detection> out;
  for (const auto& obj : scene.objects) {
    if (obj.phase != Phase::OnConveyor && obj.phase != Phase::Grasped) continue;
    Detection det;
    det.label = apparent_label(obj);
    if (det.label == Label::Unknown) {
      det.confidence = rng.uniform(noise.conf_unknown_lo, noise.conf_unknown_hi);
    } else if (obj.revealed) {
      det.confidence = rng.uniform(noise.conf_revealed_lo, noise.conf_revealed_hi);
    } else {
      det.confidence = rng.uniform(noise.conf_known_lo, noise.conf_known_hi);
    }
    // centroid as the detector would produce it: project, jitter, backproject
    PixelDepth px = world_to_pixel(obj.location, cam);
    px.x += rng.normal(0, noise.pixel_noise_std);
    px.y += rng.normal(0, noise.pixel_noise_std);
    px.z_mm = std::max(1.0, px.z_mm + rng.normal(0, noise.depth_noise_std_mm));
    det.centroid = camera_to_world(pixel_to_camera(px.x, px.y, px.z_mm, cam), cam);
    out.push_back(det);
  }
  return out;
}

Demonstration generate_demonstration(const TaskConfig& cfg, const NoiseConfig& noise,
                                     const arm::HumanArmGeometry& arm_geom,
                                     const CameraModel& cam, std::uint64_t seed) {
  if (!(noise.dropout_prob < 1.0)) {
    throw ValidationError("generate_demonstration: dropout_prob must be < 1");
  }
  cam.validate();
  for (int attempt = 0; attempt < cfg.max_placement_attempts; ++attempt) {
    util::Rng rng(util::derive_seed(seed, std::uint64_t(attempt)));
    Demonstration demo = run_episode(cfg, noise, arm_geom, cam, rng);
    const int steps = int(demo.step_count());
    if (steps >= cfg.steps_min && steps <= cfg.steps_max) {
      demo.seed = seed;
      return demo;
    }
  }
  throw GenerationError("generate_demonstration: no seeded attempt landed in the " +
                        std::to_string(cfg.steps_min) + ".." + std::to_string(cfg.steps_max) +
                        " step window");
}

void save_demonstration_jsonl(const std::string& path, const Demonstration& demo) {
  std::ostringstream out;
  const nlohmann::json header = {{"type", "demonstration"}, {"version", 1},
                                 {"task", to_string(demo.task)}, {"dt", demo.dt},
                                 {"seed", demo.seed},           {"frame_count", demo.frames.size()},
                                 {"noise", noise_to_json(demo.noise)}};
  out << header.dump() << '\n';
  for (const auto& f : demo.frames) {
    nlohmann::json detections = nlohmann::json::array();
    for (const auto& d : f.detections) {
      detections.push_back({{"label", to_string(d.label)},
                            {"confidence", d.confidence},
                            {"centroid", vec3_to_json(d.centroid)}});
    }
    nlohmann::json line = {{"eef", vec3_to_json(f.eef)},
                           {"action", vec3_to_json(f.action)},
                           {"dropped", f.dropped},
                           {"detections", std::move(detections)},
                           {"obj_label", to_string(f.obj_label)},
                           {"obj_loc", vec3_to_json(f.obj_loc)},
                           {"tilt", f.tilt}};
    if (f.keypoints) line["keypoints"] = keypoints_to_json(*f.keypoints);
    out << line.dump() << '\n';
  }
  util::write_file_atomic(path, out.str());
}

Demonstration load_demonstration_jsonl(const std::string& path) {
  std::istringstream in(util::read_file(path));
  std::string line;
  if (!std::getline(in, line)) throw ValidationError(path + ": empty demonstration file");
  const nlohmann::json header = util::parse_json(line, path);
  if (header.value("type", "") != "demonstration") {
    throw ValidationError(path + ": not a demonstration file");
  }
  if (header.value("version", -1) != 1) {
    throw ValidationError(path + ": unsupported demonstration version");
  }
  Demonstration demo;
  demo.task = task_from_string(header.at("task").get<std::string>());
  demo.dt = header.at("dt").get<double>();
  demo.seed = header.at("seed").get<std::uint64_t>();
  demo.noise = noise_from_json(header.at("noise"));
  const std::size_t expected = header.at("frame_count").get<std::size_t>();

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const nlohmann::json j = util::parse_json(line, path);
    DemoFrame f;
    f.eef = vec3_from_json(j.at("eef"));
    f.action = vec3_from_json(j.at("action"));
    f.dropped = j.at("dropped").get<bool>();
    if (j.contains("keypoints")) f.keypoints = keypoints_from_json(j.at("keypoints"));
    for (const auto& d : j.at("detections")) {
      Detection det;
      det.label = label_from_string(d.at("label").get<std::string>());
      det.confidence = d.at("confidence").get<double>();
      det.centroid = vec3_from_json(d.at("centroid"));
      f.detections.push_back(det);
    }
    f.obj_label = label_from_string(j.at("obj_label").get<std::string>());
    f.obj_loc = vec3_from_json(j.at("obj_loc"));
    f.tilt = j.at("tilt").get<bool>();
    demo.frames.push_back(std::move(f));
  }
  if (demo.frames.size() != expected) {
    throw ValidationError(path + ": frame count mismatch with header");
  }
  if (demo.frames.size() < 2) {
    throw ValidationError(path + ": demonstration needs at least 2 frames");
  }
  return demo;
}

}  // namespace mimic::synth
