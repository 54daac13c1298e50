#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "mimic/util/rng.hpp"

namespace mimic::synth {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

enum class Task { Sorting, Pouring };

// detection / state labels across both tasks
enum class Label { Unknown, Blemished, Unblemished, Red, Blue };

std::string to_string(Label label);
Label label_from_string(const std::string& s);
std::string to_string(Task task);
Task task_from_string(const std::string& s);

struct Detection {
  Label label = Label::Unknown;
  double confidence = 0.0;
  Eigen::Vector3d centroid{kNegInf, kNegInf, kNegInf};

  bool has_location() const { return centroid.allFinite(); }
};

enum class Phase { OnConveyor, Grasped, AtBin, AtCorner };

struct ObjectState {
  Label true_label = Label::Unblemished;
  bool obvious = false;   // classifiable while still on the conveyor
  bool revealed = false;  // true label visible (post inspection / never needed)
  bool poured = false;    // pouring task only
  Phase phase = Phase::OnConveyor;
  Eigen::Vector3d location = Eigen::Vector3d::Zero();
};

// Workspace geometry and motion constants shared by the scripted expert, the
// scene dynamics and the IRL MDP.
struct TaskLayout {
  Eigen::Vector3d workspace_lo{0.05, -0.50, 0.02};
  Eigen::Vector3d workspace_hi{0.75, 0.50, 0.55};
  Eigen::Vector3d conveyor_lo{0.38, -0.18, 0.10};
  Eigen::Vector3d conveyor_hi{0.52, 0.18, 0.10};
  Eigen::Vector3d bin{0.24, -0.30, 0.10};
  Eigen::Vector3d corner{0.45, 0.30, 0.10};
  Eigen::Vector3d home{0.42, 0.0, 0.26};
  double inspect_z = 0.34;
  double drop_height = 0.04;  // release point sits this far above bin/corner
  double max_step = 0.05;
  double grasp_radius = 0.02;
  double release_radius = 0.015;
  double min_object_spacing = 0.24;

  // pouring task
  Eigen::Vector3d container_blue{0.46, 0.30, 0.10};
  Eigen::Vector3d container_black{0.24, 0.30, 0.10};
  double pour_z = 0.30;
  int pour_dwell_frames = 3;

  Eigen::Vector3d bin_drop() const { return bin + Eigen::Vector3d(0, 0, drop_height); }
  Eigen::Vector3d corner_drop() const { return corner + Eigen::Vector3d(0, 0, drop_height); }
  Eigen::Vector3d pour_point(Label bottle) const {
    const Eigen::Vector3d& c = bottle == Label::Blue ? container_blue : container_black;
    return {c.x(), c.y(), pour_z};
  }
};

struct SceneState {
  std::vector<ObjectState> objects;
  Eigen::Vector3d eef = Eigen::Vector3d::Zero();
  double time = 0.0;
  std::optional<std::size_t> grasped;
  int pour_counter = 0;  // frames remaining in the current pour dwell

  bool all_sorted() const;
  // grasped object if any, else the lowest-Y unsorted object
  std::optional<std::size_t> object_of_interest() const;
};

struct TaskConfig {
  Task task = Task::Sorting;
  TaskLayout layout;
  int objects_per_episode = 2;
  int steps_min = 25;  // accepted episode length window (state-action steps)
  int steps_max = 35;
  int frame_budget = 250;
  int max_placement_attempts = 64;
};

// random placement + label mix; deterministic in rng state
SceneState initial_scene(const TaskConfig& cfg, util::Rng& rng);

// detection label visible to the perception stack for this object
Label apparent_label(const ObjectState& obj);

// One dynamics step shared by demo generation and the IRL MDP: clipped eef
// move, grasp within grasp_radius, reveal at inspection height, pour dwell at
// the matching container, release at the matching drop point.
void scene_step(SceneState& scene, const Eigen::Vector3d& action, const TaskConfig& cfg);

// Object-of-interest rules over a detection list (assumed unordered; sorted
// by world Y internally):
//   1. nothing with confidence >= 0.5        -> (Unknown, -inf sentinel)
//   2. a qualifying detection within 0.20 m  -> the nearest such
//   3. otherwise                              -> the lowest-Y qualifying one
std::pair<Label, Eigen::Vector3d> select_object_of_interest(
    const std::vector<Detection>& detections, const Eigen::Vector3d& eef);

}  // namespace mimic::synth
