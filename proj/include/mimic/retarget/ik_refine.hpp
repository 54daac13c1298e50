#pragma once

#include <array>

#include <Eigen/Core>

#include "mimic/arm/robot.hpp"
#include "mimic/nn/model.hpp"

namespace mimic::retarget {

// Iterative refinement settings. Defaults are the reference operating point:
// position error plus alpha-weighted deviation from the initial angles,
// Adam at lr 0.01 decaying 0.9 per 1000 steps, gradient norm clipped at 1,
// stop below 0.01 m or after 10000 iterations.
struct IkOptConfig {
  double alpha = 0.0005;
  double lr = 0.01;
  long max_iters = 10000;
  double decay_factor = 0.9;
  long decay_interval = 1000;
  double pos_threshold = 0.01;  // meters
  double clip_norm = 1.0;
  bool squared_position = false;  // use ||.||^2 for the position term

  void validate() const;
};

struct IkResult {
  std::array<double, 4> q{};
  double final_error = 0.0;  // position error through the FK model at q
  long iters = 0;
  bool converged = false;
};

// Minimizes  ||fk(q) - target|| + alpha * ||q - q0||  over the four mapped
// joint angles by Adam through the trained FK network, clamping to joint
// limits after every step. Throws TrainingError (with the iteration index)
// if the loss turns non-finite.
IkResult cobot_ik_refine(const nn::Network& fk_model, const arm::RobotSpec& robot,
                         const std::array<double, 4>& q0, const Eigen::Vector3d& target,
                         const IkOptConfig& cfg);

}  // namespace mimic::retarget
