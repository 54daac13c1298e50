#include "mimic/synth/camera.hpp"

#include "mimic/util/errors.hpp"

namespace mimic::synth {

using util::ValidationError;

void CameraModel::validate() const {
  if (!(fx > 0.0) || !(fy > 0.0)) throw ValidationError("camera: focal lengths must be > 0");
  std::array<bool, 3> seen{false, false, false};
  for (int a : axis_perm) {
    if (a < 0 || a > 2 || seen[std::size_t(a)]) {
      throw ValidationError("camera: axis_perm is not a permutation of {0,1,2}");
    }
    seen[std::size_t(a)] = true;
  }
}

Eigen::Matrix3d CameraModel::perm_matrix() const {
  Eigen::Matrix3d P = Eigen::Matrix3d::Zero();
  for (int i = 0; i < 3; ++i) P(i, axis_perm[std::size_t(i)]) = 1.0;
  return P;
}

Eigen::Vector3d pixel_to_camera(double x, double y, double z_mm, const CameraModel& cam,
                                bool literal_paper_units) {
  if (!(z_mm > 0.0)) throw ValidationError("pixel_to_camera: depth must be > 0");
  const double Z = z_mm / 1000.0;
  const double depth_for_xy = literal_paper_units ? z_mm : Z;
  return {(x - cam.cx) * depth_for_xy / cam.fx, (y - cam.cy) * depth_for_xy / cam.fy, Z};
}

Eigen::Vector3d camera_to_world(const Eigen::Vector3d& p_cam, const CameraModel& cam) {
  Eigen::Vector3d out;
  for (int i = 0; i < 3; ++i) out[i] = p_cam[cam.axis_perm[std::size_t(i)]];
  return out + cam.translation;
}

PixelDepth world_to_pixel(const Eigen::Vector3d& p_world, const CameraModel& cam) {
  const Eigen::Vector3d shifted = p_world - cam.translation;
  Eigen::Vector3d p_cam;
  for (int i = 0; i < 3; ++i) p_cam[cam.axis_perm[std::size_t(i)]] = shifted[i];
  if (!(p_cam.z() > 0.0)) {
    throw ValidationError("world_to_pixel: point behind the camera");
  }
  PixelDepth out;
  out.z_mm = p_cam.z() * 1000.0;
  out.x = cam.cx + cam.fx * p_cam.x() / p_cam.z();
  out.y = cam.cy + cam.fy * p_cam.y() / p_cam.z();
  return out;
}

}  // namespace mimic::synth
