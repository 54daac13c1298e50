#include <doctest.h>

#include <cmath>

#include "mimic/arm/human_arm.hpp"
#include "mimic/arm/robot.hpp"
#include "mimic/util/errors.hpp"
#include "mimic/util/rng.hpp"
#include "oracles/fk_homogeneous.hpp"

using namespace mimic;
using arm::ArmKeypoints;
using arm::HumanAngles;
using arm::HumanArmGeometry;
using arm::JointVector;
using arm::RobotSpec;

namespace {

RobotSpec planar_two_link() {
  RobotSpec spec;
  spec.name = "planar2";
  arm::JointSpec j0;
  j0.name = "j0";
  j0.axis = Eigen::Vector3d::UnitZ();
  j0.offset = Eigen::Vector3d::Zero();
  j0.limit_lo = -3.14;
  j0.limit_hi = 3.14;
  arm::JointSpec j1 = j0;
  j1.name = "j1";
  j1.offset = Eigen::Vector3d(0, 1, 0);  // links along +y at zero pose
  arm::JointSpec j2 = j1;
  j2.name = "tip";
  spec.joints = {j0, j1, j2};
  spec.mapped_indices = {0, 1, 2, 2};  // unused here; validation needs ascent
  spec.neutral_pose = {0, 0, 0};
  return spec;
}

RobotSpec seven_dof() {
  return arm::load_robot_spec(std::string(CONFIG_DIR) + "/sawyer_like.json");
}

JointVector random_pose(const RobotSpec& spec, util::Rng& rng) {
  JointVector q;
  for (const auto& j : spec.joints) q.push_back(rng.uniform(j.limit_lo, j.limit_hi));
  return q;
}

}  // namespace

TEST_CASE("analytic_fk: all-zero angles give the sum of link offsets") {
  const RobotSpec spec = seven_dof();
  const auto fk = analytic_fk(spec, JointVector(spec.dof(), 0.0));
  Eigen::Vector3d total = Eigen::Vector3d::Zero();
  for (const auto& j : spec.joints) total += j.offset;
  CHECK((fk.eef - total).norm() < 1e-15);
}

TEST_CASE("analytic_fk: planar 2-link hand geometry") {
  RobotSpec spec = planar_two_link();
  // rotating the base 90 deg about z moves the +y chain to -x; zero keeps +y.
  const auto fk0 = analytic_fk(spec, {0, 0, 0});
  CHECK((fk0.eef - Eigen::Vector3d(0, 2, 0)).norm() < 1e-12);
  const auto fk90 = analytic_fk(spec, {M_PI / 2, 0, 0});
  CHECK((fk90.eef - Eigen::Vector3d(-2, 0, 0)).norm() < 1e-12);
}

TEST_CASE("analytic_fk: matches the homogeneous-transform oracle on random poses") {
  const RobotSpec spec = seven_dof();
  util::Rng rng(1234);
  for (int trial = 0; trial < 200; ++trial) {
    const JointVector q = random_pose(spec, rng);
    const auto fk = analytic_fk(spec, q);
    const auto oracle = test_oracles::fk_oracle_positions(spec, q);
    REQUIRE(oracle.size() == fk.joint_positions.size());
    for (std::size_t i = 0; i < oracle.size(); ++i) {
      const Eigen::Vector3d o(oracle[i].x, oracle[i].y, oracle[i].z);
      CHECK((fk.joint_positions[i] - o).norm() < 1e-9);
    }
  }
}

TEST_CASE("analytic_fk: per-link distances equal configured link lengths") {
  const RobotSpec spec = seven_dof();
  util::Rng rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const JointVector q = random_pose(spec, rng);
    const auto fk = analytic_fk(spec, q);
    for (std::size_t i = 1; i < fk.joint_positions.size(); ++i) {
      const double gap = (fk.joint_positions[i] - fk.joint_positions[i - 1]).norm();
      CHECK(std::abs(gap - spec.joints[i].offset.norm()) < 1e-9);
    }
  }
}

TEST_CASE("analytic_fk: empirical Lipschitz bound in total arm length") {
  const RobotSpec spec = seven_dof();
  const double L = total_link_length(spec);
  util::Rng rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const JointVector q = random_pose(spec, rng);
    JointVector q2 = q;
    double l1 = 0.0;
    for (auto& v : q2) {
      const double d = rng.uniform(-0.01, 0.01);
      v += d;
      l1 += std::abs(d);
    }
    const double moved = (analytic_fk(spec, q2).eef - analytic_fk(spec, q).eef).norm();
    CHECK(moved <= L * l1 + 1e-12);
  }
}

TEST_CASE("restricted_fk_oracle: bit-exact composition with neutral fill") {
  const RobotSpec spec = seven_dof();
  util::Rng rng(4321);
  const auto lo = spec.mapped_limit_lo();
  const auto hi = spec.mapped_limit_hi();
  for (int trial = 0; trial < 1000; ++trial) {
    std::array<double, 4> q4{};
    for (int k = 0; k < 4; ++k) q4[std::size_t(k)] = rng.uniform(lo[std::size_t(k)], hi[std::size_t(k)]);
    const Eigen::Vector3d a = restricted_fk_oracle(spec, q4);
    const Eigen::Vector3d b = analytic_fk(spec, spec.embed_mapped(q4)).eef;
    CHECK(a.x() == b.x());
    CHECK(a.y() == b.y());
    CHECK(a.z() == b.z());
  }
  // neutral q4 reproduces the full neutral pose end-effector
  const auto neutral4 = spec.extract_mapped(spec.neutral_pose);
  CHECK((restricted_fk_oracle(spec, neutral4) - analytic_fk(spec, spec.neutral_pose).eef).norm() ==
        0.0);
}

TEST_CASE("restricted_fk_oracle: single-joint sweep stays on a circle") {
  const RobotSpec spec = seven_dof();
  // sweep the elbow-analogue joint; positions keep a constant radius about its axis
  const std::size_t elbow = spec.mapped_indices[2];
  const auto base4 = spec.extract_mapped(spec.neutral_pose);
  const JointVector q_ref = spec.embed_mapped(base4);
  const auto ref_fk = analytic_fk(spec, q_ref);
  const Eigen::Vector3d center = ref_fk.joint_positions[elbow];
  // axis of the elbow joint in the world frame at this configuration: with all
  // prior joints at zero the frame is the identity, so the local axis applies.
  const Eigen::Vector3d axis = spec.joints[elbow].axis;
  double radius = -1.0;
  for (double a = -1.0; a <= 1.0; a += 0.125) {
    auto q4 = base4;
    q4[2] = a;
    const Eigen::Vector3d p = restricted_fk_oracle(spec, q4) - center;
    const double r = (p - axis * axis.dot(p)).norm();
    if (radius < 0) {
      radius = r;
    } else {
      CHECK(r == doctest::Approx(radius).epsilon(1e-9));
    }
    CHECK(axis.dot(p) == doctest::Approx(axis.dot(ref_fk.eef - center)).epsilon(1e-9));
  }
}

TEST_CASE("within_limits: closed interval semantics") {
  const RobotSpec spec = seven_dof();
  CHECK(within_limits(spec, spec.neutral_pose));

  JointVector q = spec.neutral_pose;
  q[2] = spec.joints[2].limit_hi + 0.01;
  CHECK_FALSE(within_limits(spec, q));

  q[2] = spec.joints[2].limit_hi;  // exactly at the limit counts as inside
  CHECK(within_limits(spec, q));

  q[2] = spec.joints[2].limit_lo;
  CHECK(within_limits(spec, q));
}

TEST_CASE("human_arm_fk: zero angles hang the arm along the rest direction") {
  HumanArmGeometry geom;
  const ArmKeypoints k = human_arm_fk(geom, {0, 0, 0, 0});
  CHECK((k.hip - geom.hip).norm() == 0.0);
  CHECK((k.shoulder - (geom.hip + geom.torso_offset)).norm() < 1e-15);
  // straight down from the shoulder
  CHECK((k.elbow - (k.shoulder + Eigen::Vector3d(0, 0, -geom.upper_arm))).norm() < 1e-12);
  CHECK((k.wrist - (k.elbow + Eigen::Vector3d(0, 0, -geom.forearm))).norm() < 1e-12);
}

TEST_CASE("human_arm_fk: 90-degree elbow flexion bends the forearm by 90 degrees") {
  HumanArmGeometry geom;
  const ArmKeypoints k = human_arm_fk(geom, {0.3, 0.9, M_PI / 2, 0.1});
  const Eigen::Vector3d a = (k.shoulder - k.elbow).normalized();
  const Eigen::Vector3d b = (k.wrist - k.elbow).normalized();
  CHECK(std::abs(std::acos(std::clamp(a.dot(b), -1.0, 1.0)) - M_PI / 2) < 1e-9);
  // upper-arm length is exact
  CHECK(std::abs((k.shoulder - k.elbow).norm() - geom.upper_arm) < 1e-15);
}

TEST_CASE("joint_angles_from_keypoints: zero pose and collinear arm") {
  HumanArmGeometry geom;
  const HumanAngles zero = joint_angles_from_keypoints(geom, human_arm_fk(geom, {0, 0, 0, 0}));
  for (double a : zero) CHECK(std::abs(a) < 1e-12);

  // straight arm: elbow flexion extracted as exactly 0
  const ArmKeypoints straight = human_arm_fk(geom, {0.4, 1.2, 0.0, 0.0});
  CHECK(std::abs(joint_angles_from_keypoints(geom, straight)[2]) < 1e-12);
}

TEST_CASE("joint_angles_from_keypoints: round trip over the valid angle box") {
  HumanArmGeometry geom;
  util::Rng rng(808);
  for (int trial = 0; trial < 500; ++trial) {
    const HumanAngles q = {rng.uniform(-2.8, 2.8), rng.uniform(-1.2, 2.6),
                           rng.uniform(0.0, 2.9), rng.uniform(-1.4, 1.4)};
    const HumanAngles back = joint_angles_from_keypoints(geom, human_arm_fk(geom, q));
    for (int i = 0; i < 4; ++i) {
      CHECK(std::abs(back[std::size_t(i)] - q[std::size_t(i)]) < 1e-6);
    }
  }
}

TEST_CASE("joint_angles_from_keypoints: degenerate geometry raises") {
  HumanArmGeometry geom;
  ArmKeypoints k = human_arm_fk(geom, {0.1, 0.8, 1.0, 0.0});
  k.elbow = k.shoulder;  // zero-length upper arm
  CHECK_THROWS_AS(joint_angles_from_keypoints(geom, k), util::ValidationError);
}

TEST_CASE("solve_wrist: tracks reachable targets exactly and rejects others") {
  HumanArmGeometry geom;
  util::Rng rng(31337);
  int solved = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const Eigen::Vector3d target(rng.uniform(0.25, 0.55), rng.uniform(-0.35, 0.35),
                                 rng.uniform(0.05, 0.45));
    const auto q = solve_wrist(geom, target, 0.2);
    if (!q) continue;
    ++solved;
    const ArmKeypoints k = human_arm_fk(geom, *q);
    CHECK((k.wrist - target).norm() < 1e-9);
    CHECK((*q)[3] == 0.2);
  }
  CHECK(solved > 250);  // the sampled box is essentially reachable
  CHECK_FALSE(solve_wrist(geom, Eigen::Vector3d(2.0, 2.0, 2.0)).has_value());
  CHECK_FALSE(solve_wrist(geom, geom.hip + Eigen::Vector3d(0.01, 0.0, -0.3)).has_value());
}

TEST_CASE("robot spec loading validates structure") {
  const RobotSpec spec = seven_dof();
  CHECK(spec.dof() == 7);
  CHECK(spec.mapped_indices == std::array<std::size_t, 4>{0, 1, 3, 5});
  CHECK_THROWS_AS(arm::load_robot_spec("does_not_exist.json"), util::ValidationError);

  const RobotSpec kuka = arm::load_robot_spec(std::string(CONFIG_DIR) + "/kuka_like.json");
  CHECK(kuka.dof() == 6);
  CHECK(kuka.mapped_indices == std::array<std::size_t, 4>{0, 1, 2, 4});
}
