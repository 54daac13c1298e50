#include "mimic/arm/robot.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Geometry>
#include <nlohmann/json.hpp>

#include "mimic/util/errors.hpp"
#include "mimic/util/io.hpp"

namespace mimic::arm {

using util::ValidationError;

void RobotSpec::validate() const {
  if (joints.empty()) throw ValidationError("robot spec '" + name + "': no joints");
  for (std::size_t i = 0; i < joints.size(); ++i) {
    const auto& j = joints[i];
    if (!(j.limit_lo < j.limit_hi)) {
      throw ValidationError("robot spec '" + name + "': joint " + std::to_string(i) +
                            " limits not ordered");
    }
    if (std::abs(j.axis.norm() - 1.0) > 1e-9) {
      throw ValidationError("robot spec '" + name + "': joint " + std::to_string(i) +
                            " axis is not unit length");
    }
  }
  if (neutral_pose.size() != joints.size()) {
    throw ValidationError("robot spec '" + name + "': neutral pose length mismatch");
  }
  for (std::size_t k = 0; k < 4; ++k) {
    if (mapped_indices[k] >= joints.size()) {
      throw ValidationError("robot spec '" + name + "': mapped index out of range");
    }
    if (k > 0 && mapped_indices[k] <= mapped_indices[k - 1]) {
      throw ValidationError("robot spec '" + name + "': mapped indices must ascend base->tip");
    }
  }
}

JointVector RobotSpec::embed_mapped(const std::array<double, 4>& q4) const {
  JointVector q = neutral_pose;
  for (std::size_t k = 0; k < 4; ++k) q[mapped_indices[k]] = q4[k];
  return q;
}

std::array<double, 4> RobotSpec::extract_mapped(const JointVector& q) const {
  std::array<double, 4> out{};
  for (std::size_t k = 0; k < 4; ++k) out[k] = q[mapped_indices[k]];
  return out;
}

std::array<double, 4> RobotSpec::mapped_limit_lo() const {
  std::array<double, 4> out{};
  for (std::size_t k = 0; k < 4; ++k) out[k] = joints[mapped_indices[k]].limit_lo;
  return out;
}

std::array<double, 4> RobotSpec::mapped_limit_hi() const {
  std::array<double, 4> out{};
  for (std::size_t k = 0; k < 4; ++k) out[k] = joints[mapped_indices[k]].limit_hi;
  return out;
}

FkResult analytic_fk(const RobotSpec& spec, const JointVector& q) {
  if (q.size() != spec.dof()) {
    throw ValidationError("analytic_fk: joint vector length " + std::to_string(q.size()) +
                          " != dof " + std::to_string(spec.dof()));
  }
  FkResult out;
  out.joint_positions.reserve(spec.dof());
  Eigen::Matrix3d R = Eigen::Matrix3d::Identity();
  Eigen::Vector3d p = Eigen::Vector3d::Zero();
  for (std::size_t i = 0; i < spec.dof(); ++i) {
    p += R * spec.joints[i].offset;
    out.joint_positions.push_back(p);
    R = R * Eigen::AngleAxisd(q[i], spec.joints[i].axis).toRotationMatrix();
  }
  out.eef = out.joint_positions.back();
  return out;
}

Eigen::Vector3d restricted_fk_oracle(const RobotSpec& spec, const std::array<double, 4>& q4) {
  return analytic_fk(spec, spec.embed_mapped(q4)).eef;
}

bool within_limits(const RobotSpec& spec, const JointVector& q) {
  if (q.size() != spec.dof()) {
    throw ValidationError("within_limits: joint vector length mismatch");
  }
  for (std::size_t i = 0; i < spec.dof(); ++i) {
    if (q[i] < spec.joints[i].limit_lo || q[i] > spec.joints[i].limit_hi) return false;
  }
  return true;
}

JointVector clamp_to_limits(const RobotSpec& spec, JointVector q) {
  for (std::size_t i = 0; i < spec.dof(); ++i) {
    q[i] = std::clamp(q[i], spec.joints[i].limit_lo, spec.joints[i].limit_hi);
  }
  return q;
}

double total_link_length(const RobotSpec& spec) {
  double total = 0.0;
  for (const auto& j : spec.joints) total += j.offset.norm();
  return total;
}

RobotSpec load_robot_spec(const std::string& path) {
  const nlohmann::json doc = util::load_json_file(path);
  if (doc.value("format", "") != "mimic-robot") {
    throw ValidationError(path + ": not a robot spec file");
  }
  if (doc.value("version", -1) != 1) {
    throw ValidationError(path + ": unsupported robot spec version");
  }
  RobotSpec spec;
  spec.name = doc.value("name", "unnamed");
  for (const auto& j : doc.at("joints")) {
    JointSpec js;
    js.name = j.value("name", "");
    const auto axis = j.at("axis");
    const auto off = j.at("offset");
    js.axis = Eigen::Vector3d(axis[0].get<double>(), axis[1].get<double>(), axis[2].get<double>());
    js.offset = Eigen::Vector3d(off[0].get<double>(), off[1].get<double>(), off[2].get<double>());
    js.limit_lo = j.at("limit_lo").get<double>();
    js.limit_hi = j.at("limit_hi").get<double>();
    spec.joints.push_back(js);
  }
  const auto& mapped = doc.at("mapped_indices");
  if (mapped.size() != 4) throw ValidationError(path + ": mapped_indices must have 4 entries");
  for (std::size_t k = 0; k < 4; ++k) spec.mapped_indices[k] = mapped[k].get<std::size_t>();
  spec.neutral_pose = doc.at("neutral_pose").get<JointVector>();
  spec.validate();
  return spec;
}

}  // namespace mimic::arm
