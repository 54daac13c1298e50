#include "mimic/arm/human_arm.hpp"

#include <cmath>

#include <Eigen/Geometry>

#include "mimic/util/errors.hpp"

namespace mimic::arm {

using util::ValidationError;

namespace {

constexpr double kDegenerate = 1e-9;

inline double wrap_pi(double a) {
  while (a > M_PI) a -= 2.0 * M_PI;
  while (a <= -M_PI) a += 2.0 * M_PI;
  return a;
}

inline Eigen::Vector3d rot_z(double a, const Eigen::Vector3d& v) {
  const double c = std::cos(a), s = std::sin(a);
  return {c * v.x() - s * v.y(), s * v.x() + c * v.y(), v.z()};
}

}  // namespace

void HumanArmGeometry::validate() const {
  if (!(upper_arm > 0.0) || !(forearm > 0.0)) {
    throw ValidationError("human arm geometry: segment lengths must be positive");
  }
  if (torso_offset.head<2>().norm() < kDegenerate) {
    throw ValidationError("human arm geometry: torso offset needs a horizontal component");
  }
}

ArmKeypoints human_arm_fk(const HumanArmGeometry& geom, const HumanAngles& q) {
  geom.validate();
  const double yaw = q[0], elev = q[1], flex = q[2], dev = q[3];

  ArmKeypoints k;
  k.hip = geom.hip;
  k.shoulder = geom.hip + rot_z(yaw, geom.torso_offset);

  const Eigen::Vector3d n = rot_z(yaw, Eigen::Vector3d::UnitY());  // plane normal
  const Eigen::Vector3d u =
      rot_z(yaw, Eigen::Vector3d(std::sin(elev), 0.0, -std::cos(elev)));
  k.elbow = k.shoulder + geom.upper_arm * u;

  const Eigen::Vector3d w = n.cross(u);
  const Eigen::Vector3d f = std::cos(flex) * u + std::sin(flex) * w;
  k.wrist = k.elbow + geom.forearm * f;

  const Eigen::Vector3d b2 = n.cross(f);
  const Eigen::Vector3d hand_dir = std::cos(dev) * f + std::sin(dev) * b2;
  k.index_finger = k.wrist + geom.hand * hand_dir;
  k.thumb = k.wrist + geom.thumb_len * (std::cos(geom.thumb_splay) * hand_dir +
                                        std::sin(geom.thumb_splay) * n);
  return k;
}

HumanAngles joint_angles_from_keypoints(const HumanArmGeometry& geom, const ArmKeypoints& k) {
  geom.validate();
  const Eigen::Vector3d s = k.shoulder - k.hip;
  if (s.head<2>().norm() < kDegenerate) {
    throw ValidationError("keypoint extraction: shoulder sits on the hip vertical axis");
  }
  const double phi0 = std::atan2(geom.torso_offset.y(), geom.torso_offset.x());
  const double yaw = wrap_pi(std::atan2(s.y(), s.x()) - phi0);

  const Eigen::Vector3d ue = k.elbow - k.shoulder;
  if (ue.norm() < kDegenerate) {
    throw ValidationError("keypoint extraction: zero-length upper arm");
  }
  const Eigen::Vector3d u = ue.normalized();
  const Eigen::Vector3d u_deyaw = rot_z(-yaw, u);
  const double elev = std::atan2(u_deyaw.x(), -u_deyaw.z());

  const Eigen::Vector3d fe = k.wrist - k.elbow;
  if (fe.norm() < kDegenerate) {
    throw ValidationError("keypoint extraction: zero-length forearm");
  }
  const Eigen::Vector3d f = fe.normalized();
  const Eigen::Vector3d n = rot_z(yaw, Eigen::Vector3d::UnitY());
  const Eigen::Vector3d w = n.cross(u);
  const double flex = std::atan2(f.dot(w), f.dot(u));

  double dev = 0.0;
  if (k.index_finger) {
    const Eigen::Vector3d he = *k.index_finger - k.wrist;
    if (he.norm() < kDegenerate) {
      throw ValidationError("keypoint extraction: zero-length hand");
    }
    const Eigen::Vector3d h = he.normalized();
    const Eigen::Vector3d b2 = n.cross(f);
    dev = std::atan2(h.dot(b2), h.dot(f));
  }
  return {yaw, elev, flex, dev};
}

std::optional<HumanAngles> solve_wrist(const HumanArmGeometry& geom,
                                       const Eigen::Vector3d& target,
                                       double wrist_deviation) {
  geom.validate();
  const Eigen::Vector3d p = target - geom.hip;
  const double rho = p.head<2>().norm();
  const double t_y = geom.torso_offset.y();
  if (rho < std::abs(t_y) + 1e-6) return std::nullopt;

  // yaw such that the de-yawed target lies in the arm plane (front branch)
  const double delta = std::asin(t_y / rho);
  const double yaw = wrap_pi(std::atan2(p.y(), p.x()) - delta);

  const double x_plane = rho * std::cos(delta) - geom.torso_offset.x();
  const double z_plane = p.z() - geom.torso_offset.z();
  const double d = std::hypot(x_plane, z_plane);
  const double lu = geom.upper_arm, lf = geom.forearm;
  if (d > lu + lf - 1e-6 || d < std::abs(lu - lf) + 1e-6) return std::nullopt;

  const double cos_gamma = (lu * lu + lf * lf - d * d) / (2.0 * lu * lf);
  const double gamma = std::acos(std::clamp(cos_gamma, -1.0, 1.0));
  const double flex = M_PI - gamma;
  const double psi = std::atan2(x_plane, -z_plane);
  const double beta = std::atan2(lf * std::sin(flex), lu + lf * std::cos(flex));
  const double elev = psi + beta;
  return HumanAngles{yaw, elev, flex, wrist_deviation};
}

}  // namespace mimic::arm
