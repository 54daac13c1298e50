#include "mimic/retarget/symbolic_map.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "mimic/util/errors.hpp"
#include "mimic/util/io.hpp"

namespace mimic::retarget {

using util::ValidationError;

void SymbolicJointMap::validate(const arm::RobotSpec& robot) const {
  std::array<bool, 4> covered{false, false, false, false};
  for (const auto& e : entries) {
    if (e.scale == 0.0) throw ValidationError("symbolic map: scale must be nonzero");
    if (e.human_angle_index > 3) {
      throw ValidationError("symbolic map: human angle index out of range");
    }
    bool found = false;
    for (std::size_t k = 0; k < 4; ++k) {
      if (robot.mapped_indices[k] == e.cobot_joint_index) {
        if (covered[k]) throw ValidationError("symbolic map: duplicate cobot joint");
        covered[k] = true;
        found = true;
      }
    }
    if (!found) {
      throw ValidationError("symbolic map: cobot joint " + std::to_string(e.cobot_joint_index) +
                            " is not one of the robot's mapped joints");
    }
  }
}

std::array<double, 4> SymbolicJointMap::map(const arm::RobotSpec& robot,
                                            const arm::HumanAngles& human) const {
  std::array<double, 4> q4{};
  for (const auto& e : entries) {
    for (std::size_t k = 0; k < 4; ++k) {
      if (robot.mapped_indices[k] == e.cobot_joint_index) {
        const auto& joint = robot.joints[e.cobot_joint_index];
        const double raw = e.scale * human[e.human_angle_index] + e.offset;
        q4[k] = std::clamp(raw, joint.limit_lo, joint.limit_hi);
      }
    }
  }
  return q4;
}

SymbolicJointMap default_map(const arm::RobotSpec& robot) {
  SymbolicJointMap m;
  for (std::size_t k = 0; k < 4; ++k) {
    m.entries[k] = {k, robot.mapped_indices[k], 1.0,
                    robot.neutral_pose[robot.mapped_indices[k]]};
  }
  m.validate(robot);
  return m;
}

SymbolicJointMap map_from_json(const nlohmann::json& j, const arm::RobotSpec& robot) {
  if (!j.is_array() || j.size() != 4) {
    throw ValidationError("symbolic map: expected an array of 4 entries");
  }
  SymbolicJointMap m;
  for (std::size_t k = 0; k < 4; ++k) {
    const auto& e = j[k];
    m.entries[k] = {e.at("human_angle_index").get<std::size_t>(),
                    e.at("cobot_joint_index").get<std::size_t>(),
                    e.at("scale").get<double>(), e.at("offset").get<double>()};
  }
  m.validate(robot);
  return m;
}

SymbolicJointMap load_symbolic_map(const std::string& robot_config_path,
                                   const arm::RobotSpec& robot) {
  const nlohmann::json doc = util::load_json_file(robot_config_path);
  if (!doc.contains("symbolic_map")) return default_map(robot);
  return map_from_json(doc.at("symbolic_map"), robot);
}

}  // namespace mimic::retarget
