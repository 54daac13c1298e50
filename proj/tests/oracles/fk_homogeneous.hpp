#pragma once

// Test-only forward-kinematics oracle built on explicit 4x4 homogeneous
// transforms and Rodrigues' formula, written independently of arm::analytic_fk.

#include <array>
#include <cmath>
#include <vector>

#include "mimic/arm/robot.hpp"

namespace mimic::test_oracles {

using Mat4 = std::array<std::array<double, 4>, 4>;

inline Mat4 mat4_identity() {
  Mat4 m{};
  for (int i = 0; i < 4; ++i) m[i][i] = 1.0;
  return m;
}

inline Mat4 mat4_mul(const Mat4& a, const Mat4& b) {
  Mat4 c{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      double acc = 0.0;
      for (int k = 0; k < 4; ++k) acc += a[i][k] * b[k][j];
      c[i][j] = acc;
    }
  }
  return c;
}

inline Mat4 mat4_translation(double x, double y, double z) {
  Mat4 m = mat4_identity();
  m[0][3] = x;
  m[1][3] = y;
  m[2][3] = z;
  return m;
}

// Rodrigues rotation about a unit axis, embedded in a homogeneous transform
inline Mat4 mat4_axis_rotation(double ax, double ay, double az, double angle) {
  const double c = std::cos(angle), s = std::sin(angle), t = 1.0 - c;
  Mat4 m = mat4_identity();
  m[0][0] = t * ax * ax + c;
  m[0][1] = t * ax * ay - s * az;
  m[0][2] = t * ax * az + s * ay;
  m[1][0] = t * ax * ay + s * az;
  m[1][1] = t * ay * ay + c;
  m[1][2] = t * ay * az - s * ax;
  m[2][0] = t * ax * az - s * ay;
  m[2][1] = t * ay * az + s * ax;
  m[2][2] = t * az * az + c;
  return m;
}

struct FkOraclePoint {
  double x, y, z;
};

inline std::vector<FkOraclePoint> fk_oracle_positions(const mimic::arm::RobotSpec& spec,
                                                      const std::vector<double>& q) {
  Mat4 T = mat4_identity();
  std::vector<FkOraclePoint> out;
  for (std::size_t i = 0; i < spec.joints.size(); ++i) {
    const auto& j = spec.joints[i];
    T = mat4_mul(T, mat4_translation(j.offset.x(), j.offset.y(), j.offset.z()));
    out.push_back({T[0][3], T[1][3], T[2][3]});
    T = mat4_mul(T, mat4_axis_rotation(j.axis.x(), j.axis.y(), j.axis.z(), q[i]));
  }
  return out;
}

}  // namespace mimic::test_oracles
