#include "mimic/synth/expert.hpp"

namespace mimic::synth {

namespace {

Eigen::Vector3d step_toward(const Eigen::Vector3d& from, const Eigen::Vector3d& to,
                            double max_step) {
  const Eigen::Vector3d delta = to - from;
  const double dist = delta.norm();
  if (dist <= max_step || dist == 0.0) return delta;
  return delta * (max_step / dist);
}

}  // namespace

Eigen::Vector3d expert_target(const SceneState& scene, const TaskConfig& cfg) {
  const TaskLayout& lay = cfg.layout;
  const auto idx = scene.object_of_interest();
  if (!idx) return scene.eef;  // task complete, hold position
  const ObjectState& obj = scene.objects[*idx];

  if (obj.phase == Phase::OnConveyor) return obj.location;

  if (cfg.task == Task::Sorting) {
    switch (apparent_label(obj)) {
      case Label::Blemished:
        return lay.bin_drop();
      case Label::Unknown:
        // straight lift to the inspection height
        return {scene.eef.x(), scene.eef.y(), lay.inspect_z};
      default: {
        // revealed unblemished: carry at height to above the corner, descend
        const Eigen::Vector3d drop = lay.corner_drop();
        const double horiz = std::hypot(scene.eef.x() - drop.x(), scene.eef.y() - drop.y());
        if (horiz > 1e-9) {
          return {drop.x(), drop.y(), std::max(scene.eef.z(), lay.inspect_z)};
        }
        return drop;
      }
    }
  }

  // pouring
  if (!obj.poured) return lay.pour_point(obj.true_label);
  return lay.bin_drop();
}

Eigen::Vector3d scripted_expert(const SceneState& scene, const TaskConfig& cfg) {
  if (!scene.object_of_interest()) return Eigen::Vector3d::Zero();
  return step_toward(scene.eef, expert_target(scene, cfg), cfg.layout.max_step);
}

}  // namespace mimic::synth
