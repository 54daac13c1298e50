#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace mimic::arm {

using JointVector = std::vector<double>;

struct JointSpec {
  std::string name;
  Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();    // rotation axis, unit length
  Eigen::Vector3d offset = Eigen::Vector3d::Zero();   // meters, from the previous joint frame
  double limit_lo = -3.14;
  double limit_hi = 3.14;
};

// Serial kinematic chain. mapped_indices name the four joints that play the
// role of the human hip/shoulder/elbow/wrist; the remaining joints hold the
// neutral pose during retargeting.
struct RobotSpec {
  std::string name;
  std::vector<JointSpec> joints;
  std::array<std::size_t, 4> mapped_indices{};
  JointVector neutral_pose;

  std::size_t dof() const { return joints.size(); }
  void validate() const;  // throws ValidationError

  // full joint vector with mapped joints overridden and the rest at neutral
  JointVector embed_mapped(const std::array<double, 4>& q4) const;
  std::array<double, 4> extract_mapped(const JointVector& q) const;
  std::array<double, 4> mapped_limit_lo() const;
  std::array<double, 4> mapped_limit_hi() const;
};

struct FkResult {
  std::vector<Eigen::Vector3d> joint_positions;  // origin of each joint frame
  Eigen::Vector3d eef;                           // == joint_positions.back()
};

// Rotation-about-axis chain composition. The end-effector is the origin of the
// last joint frame, so with all-zero angles it equals the sum of link offsets.
FkResult analytic_fk(const RobotSpec& spec, const JointVector& q);

// analytic_fk with only the mapped joints moving; everything else at neutral
Eigen::Vector3d restricted_fk_oracle(const RobotSpec& spec, const std::array<double, 4>& q4);

// closed-interval limit check
bool within_limits(const RobotSpec& spec, const JointVector& q);

JointVector clamp_to_limits(const RobotSpec& spec, JointVector q);

double total_link_length(const RobotSpec& spec);

RobotSpec load_robot_spec(const std::string& path);

}  // namespace mimic::arm
