#pragma once

#include <array>

#include <nlohmann/json_fwd.hpp>

#include "mimic/arm/human_arm.hpp"
#include "mimic/arm/robot.hpp"

namespace mimic::retarget {

// One-to-one affine correspondence between human arm angles and the cobot's
// mapped joints: cobot = scale * human + offset, clamped to joint limits.
struct SymbolicJointMap {
  struct Entry {
    std::size_t human_angle_index = 0;
    std::size_t cobot_joint_index = 0;
    double scale = 1.0;
    double offset = 0.0;
  };
  std::array<Entry, 4> entries;

  // entries must cover the robot's mapped joints exactly; scale must be nonzero
  void validate(const arm::RobotSpec& robot) const;

  // initial mapped-joint angles in mapped_indices order, limit-clamped
  std::array<double, 4> map(const arm::RobotSpec& robot, const arm::HumanAngles& human) const;
};

// scale 1, offset such that the human rest pose (all zeros) maps to the
// cobot's neutral pose
SymbolicJointMap default_map(const arm::RobotSpec& robot);

SymbolicJointMap map_from_json(const nlohmann::json& j, const arm::RobotSpec& robot);

// reads the "symbolic_map" section of a robot config file; falls back to the
// default map when absent
SymbolicJointMap load_symbolic_map(const std::string& robot_config_path,
                                   const arm::RobotSpec& robot);

}  // namespace mimic::retarget
