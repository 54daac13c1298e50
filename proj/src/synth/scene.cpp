#include "mimic/synth/scene.hpp"

#include <algorithm>

#include "mimic/util/errors.hpp"

namespace mimic::synth {

using util::ValidationError;

std::string to_string(Label label) {
  switch (label) {
    case Label::Unknown: return "unknown";
    case Label::Blemished: return "blemished";
    case Label::Unblemished: return "unblemished";
    case Label::Red: return "red";
    case Label::Blue: return "blue";
  }
  return "unknown";
}

Label label_from_string(const std::string& s) {
  if (s == "unknown") return Label::Unknown;
  if (s == "blemished") return Label::Blemished;
  if (s == "unblemished") return Label::Unblemished;
  if (s == "red") return Label::Red;
  if (s == "blue") return Label::Blue;
  throw ValidationError("unknown label '" + s + "'");
}

std::string to_string(Task task) { return task == Task::Sorting ? "sorting" : "pouring"; }

Task task_from_string(const std::string& s) {
  if (s == "sorting") return Task::Sorting;
  if (s == "pouring") return Task::Pouring;
  throw ValidationError("unknown task '" + s + "'");
}

bool SceneState::all_sorted() const {
  for (const auto& o : objects) {
    if (o.phase == Phase::OnConveyor || o.phase == Phase::Grasped) return false;
  }
  return true;
}

std::optional<std::size_t> SceneState::object_of_interest() const {
  if (grasped) return grasped;
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < objects.size(); ++i) {
    if (objects[i].phase != Phase::OnConveyor) continue;
    if (!best || objects[i].location.y() < objects[*best].location.y()) best = i;
  }
  return best;
}

Label apparent_label(const ObjectState& obj) {
  if (obj.revealed) {
    // emptied bottles lose their color class
    if (obj.poured) return Label::Unknown;
    return obj.true_label;
  }
  if (obj.obvious) return obj.true_label;
  return Label::Unknown;
}

SceneState initial_scene(const TaskConfig& cfg, util::Rng& rng) {
  const TaskLayout& lay = cfg.layout;
  SceneState scene;
  scene.eef = lay.home;

  for (int attempt = 0; attempt < cfg.max_placement_attempts; ++attempt) {
    scene.objects.clear();
    bool ok = true;
    for (int i = 0; i < cfg.objects_per_episode && ok; ++i) {
      ObjectState obj;
      for (int tries = 0; tries < 100; ++tries) {
        obj.location = {rng.uniform(lay.conveyor_lo.x(), lay.conveyor_hi.x()),
                        rng.uniform(lay.conveyor_lo.y(), lay.conveyor_hi.y()),
                        lay.conveyor_lo.z()};
        bool clear = true;
        for (const auto& other : scene.objects) {
          if ((other.location - obj.location).norm() < lay.min_object_spacing) clear = false;
        }
        if (clear) break;
        if (tries == 99) ok = false;
      }
      scene.objects.push_back(obj);
    }
    if (ok) break;
    if (attempt == cfg.max_placement_attempts - 1) {
      throw util::GenerationError("initial_scene: could not place objects with spacing " +
                                  std::to_string(lay.min_object_spacing));
    }
  }

  if (cfg.task == Task::Sorting) {
    // one inspection-route onion plus obviously blemished ones keeps episode
    // lengths near the configured window while covering every behavior mode
    for (std::size_t i = 0; i < scene.objects.size(); ++i) {
      auto& obj = scene.objects[i];
      if (i == 0) {
        obj.true_label = rng.uniform01() < 0.5 ? Label::Unblemished : Label::Blemished;
        obj.obvious = false;
      } else {
        obj.true_label = Label::Blemished;
        obj.obvious = true;
      }
    }
  } else {
    for (auto& obj : scene.objects) {
      obj.true_label = rng.uniform01() < 0.5 ? Label::Red : Label::Blue;
      obj.obvious = true;  // bottle color is visible on the conveyor
      obj.revealed = true;
    }
  }
  return scene;
}

void scene_step(SceneState& scene, const Eigen::Vector3d& action, const TaskConfig& cfg) {
  const TaskLayout& lay = cfg.layout;
  if (action.lpNorm<Eigen::Infinity>() > lay.max_step + 1e-9) {
    throw ValidationError("scene_step: action exceeds max_step");
  }
  scene.eef = (scene.eef + action).cwiseMax(lay.workspace_lo).cwiseMin(lay.workspace_hi);
  scene.time += 0.1;

  if (scene.grasped) {
    ObjectState& obj = scene.objects[*scene.grasped];
    obj.location = scene.eef;

    if (cfg.task == Task::Sorting) {
      if (!obj.revealed && scene.eef.z() >= lay.inspect_z) obj.revealed = true;
      const Label label = apparent_label(obj);
      if (label == Label::Blemished &&
          (scene.eef - lay.bin_drop()).norm() <= lay.release_radius) {
        obj.phase = Phase::AtBin;
        scene.grasped.reset();
      } else if (label == Label::Unblemished &&
                 (scene.eef - lay.corner_drop()).norm() <= lay.release_radius) {
        obj.phase = Phase::AtCorner;
        scene.grasped.reset();
      }
    } else {
      // pour when aligned above the matching container, then bin the empty
      if (!obj.poured) {
        const Label color = obj.true_label;
        if ((scene.eef - lay.pour_point(color)).norm() <= lay.release_radius) {
          scene.pour_counter += 1;
          if (scene.pour_counter >= lay.pour_dwell_frames) {
            obj.poured = true;
            scene.pour_counter = 0;
          }
        } else {
          scene.pour_counter = 0;
        }
      } else if ((scene.eef - lay.bin_drop()).norm() <= lay.release_radius) {
        obj.phase = Phase::AtBin;
        scene.grasped.reset();
      }
    }
  } else {
    // grasp the nearest conveyor object within reach
    std::optional<std::size_t> nearest;
    double best = lay.grasp_radius;
    for (std::size_t i = 0; i < scene.objects.size(); ++i) {
      if (scene.objects[i].phase != Phase::OnConveyor) continue;
      const double d = (scene.objects[i].location - scene.eef).norm();
      if (d <= best) {
        best = d;
        nearest = i;
      }
    }
    if (nearest) {
      scene.grasped = nearest;
      scene.objects[*nearest].phase = Phase::Grasped;
      scene.objects[*nearest].location = scene.eef;
    }
  }
}

std::pair<Label, Eigen::Vector3d> select_object_of_interest(
    const std::vector<Detection>& detections, const Eigen::Vector3d& eef) {
  std::vector<Detection> sorted = detections;
  std::stable_sort(sorted.begin(), sorted.end(), [](const Detection& a, const Detection& b) {
    return a.centroid.y() < b.centroid.y();
  });

  std::vector<const Detection*> qualifying;
  for (const auto& d : sorted) {
    if (d.confidence >= 0.5 && d.has_location()) qualifying.push_back(&d);
  }
  if (qualifying.empty()) {
    return {Label::Unknown, Eigen::Vector3d(kNegInf, kNegInf, kNegInf)};
  }
  // within 20 cm of the end-effector: the object being manipulated wins,
  // nearest first when several qualify
  const Detection* near_best = nullptr;
  for (const Detection* d : qualifying) {
    const double dist = (d->centroid - eef).norm();
    if (dist < 0.20 && (!near_best || dist < (near_best->centroid - eef).norm())) {
      near_best = d;
    }
  }
  if (near_best) return {near_best->label, near_best->centroid};
  return {qualifying.front()->label, qualifying.front()->centroid};
}

}  // namespace mimic::synth
