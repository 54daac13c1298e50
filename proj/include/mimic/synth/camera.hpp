#pragma once

#include <array>

#include <Eigen/Core>

namespace mimic::synth {

// Pinhole intrinsics plus a rigid extrinsic made of an axis permutation and a
// translation. world = P * p_cam + translation, with the default permutation
// sending camera (X, Y, Z) to world (y, z, x) so depth grows along world x.
struct CameraModel {
  double fx = 615.0;
  double fy = 615.0;
  double cx = 480.0;
  double cy = 480.0;
  std::array<int, 3> axis_perm = {2, 0, 1};  // world[i] = cam[axis_perm[i]]
  Eigen::Vector3d translation{-0.30, 0.0, -0.20};

  void validate() const;  // fx, fy > 0; axis_perm a permutation
  Eigen::Matrix3d perm_matrix() const;
};

// Depth-image backprojection; z is in millimeters, the result in meters.
// With literal_paper_units set, X and Y keep the raw millimeter depth in the
// numerator (the formula as often printed) and only Z is converted — provided
// for documentation of the unit mismatch, not for pipeline use.
Eigen::Vector3d pixel_to_camera(double x, double y, double z_mm, const CameraModel& cam,
                                bool literal_paper_units = false);

Eigen::Vector3d camera_to_world(const Eigen::Vector3d& p_cam, const CameraModel& cam);

struct PixelDepth {
  double x = 0.0;
  double y = 0.0;
  double z_mm = 0.0;
};

// exact inverse of camera_to_world ∘ pixel_to_camera; throws when the point
// lands behind the camera
PixelDepth world_to_pixel(const Eigen::Vector3d& p_world, const CameraModel& cam);

}  // namespace mimic::synth
