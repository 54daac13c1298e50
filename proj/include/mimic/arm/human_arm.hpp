#pragma once

#include <array>
#include <optional>

#include <Eigen/Core>

namespace mimic::arm {

// 3D keypoints for one frame, meters, world frame.
struct ArmKeypoints {
  Eigen::Vector3d hip;
  Eigen::Vector3d shoulder;
  Eigen::Vector3d elbow;
  Eigen::Vector3d wrist;
  std::optional<Eigen::Vector3d> index_finger;
  std::optional<Eigen::Vector3d> thumb;
};

// 4-DoF human right-arm model used to synthesize demonstrations. The arm
// operates in the vertical plane selected by the torso yaw; the wrist
// deviation angle moves only the hand (finger keypoints).
struct HumanArmGeometry {
  Eigen::Vector3d hip = Eigen::Vector3d::Zero();
  Eigen::Vector3d torso_offset{0.05, -0.20, 0.45};  // hip -> shoulder at yaw 0
  double upper_arm = 0.35;
  double forearm = 0.35;
  double hand = 0.10;       // wrist -> index fingertip
  double thumb_len = 0.07;  // wrist -> thumb tip
  double thumb_splay = 0.7; // radians, thumb offset from the hand direction

  void validate() const;
};

// Angle convention (all radians):
//   [0] torso yaw about vertical z, 0 when the shoulder offset sits at its
//       configured azimuth; positive counter-clockwise seen from above
//   [1] shoulder elevation of the upper arm from straight down, positive
//       raising the arm forward within the yawed plane; useful range (0, pi)
//   [2] elbow flexion, 0 for a straight arm; useful range [0, pi)
//   [3] wrist deviation of the hand about the plane normal; range (-pi/2, pi/2)
using HumanAngles = std::array<double, 4>;

ArmKeypoints human_arm_fk(const HumanArmGeometry& geom, const HumanAngles& q);

// Exact inverse of human_arm_fk on its image. Wrist deviation is recovered
// from the index-finger keypoint and reported as 0 when fingers are absent.
// Throws ValidationError on degenerate (zero-length segment) input.
HumanAngles joint_angles_from_keypoints(const HumanArmGeometry& geom, const ArmKeypoints& k);

// Closed-form wrist tracking for the scripted expert: angles that place the
// wrist at `target` (single consistent elbow branch), or nullopt when the
// target is outside the arm's reachable set.
std::optional<HumanAngles> solve_wrist(const HumanArmGeometry& geom,
                                       const Eigen::Vector3d& target,
                                       double wrist_deviation = 0.0);

}  // namespace mimic::arm
