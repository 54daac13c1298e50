#include "mimic/retarget/ik_refine.hpp"

#include <cmath>

#include "mimic/util/errors.hpp"

namespace mimic::retarget {

using util::TrainingError;
using util::ValidationError;

void IkOptConfig::validate() const {
  if (!(alpha >= 0.0)) throw ValidationError("ik config: alpha must be >= 0");
  if (!(lr > 0.0)) throw ValidationError("ik config: lr must be > 0");
  if (max_iters <= 0) throw ValidationError("ik config: max_iters must be > 0");
  if (!(decay_factor > 0.0 && decay_factor <= 1.0)) {
    throw ValidationError("ik config: decay_factor must be in (0, 1]");
  }
  if (decay_interval <= 0) throw ValidationError("ik config: decay_interval must be > 0");
  if (!(pos_threshold > 0.0)) throw ValidationError("ik config: pos_threshold must be > 0");
  if (!(clip_norm > 0.0)) throw ValidationError("ik config: clip_norm must be > 0");
}

IkResult cobot_ik_refine(const nn::Network& fk_model, const arm::RobotSpec& robot,
                         const std::array<double, 4>& q0, const Eigen::Vector3d& target,
                         const IkOptConfig& cfg) {
  cfg.validate();
  if (!target.allFinite()) throw ValidationError("cobot_ik_refine: non-finite target");
  if (fk_model.input_dim() != 4 || fk_model.output_dim() != 3) {
    throw ValidationError("cobot_ik_refine: FK model must map 4 angles to 3 coordinates");
  }
  const auto lo = robot.mapped_limit_lo();
  const auto hi = robot.mapped_limit_hi();

  auto clamp4 = [&](std::array<double, 4> q) {
    for (int k = 0; k < 4; ++k) {
      q[std::size_t(k)] = std::clamp(q[std::size_t(k)], lo[std::size_t(k)], hi[std::size_t(k)]);
    }
    return q;
  };

  auto fk_at = [&](const std::array<double, 4>& q) {
    const nn::Tensor out =
        fk_model.forward(nn::Tensor::vector({q[0], q[1], q[2], q[3]}));
    return Eigen::Vector3d(out[0], out[1], out[2]);
  };

  IkResult result;
  result.q = clamp4(q0);

  // Adam state over the four angles
  std::array<double, 4> m{}, v{};
  const double b1 = 0.9, b2 = 0.999, eps = 1e-8;

  for (long iter = 0; iter <= cfg.max_iters; ++iter) {
    nn::GradientTape tape(fk_model);
    const nn::Tensor out = tape.forward(
        nn::Tensor::vector({result.q[0], result.q[1], result.q[2], result.q[3]}));
    const Eigen::Vector3d p(out[0], out[1], out[2]);
    const Eigen::Vector3d resid = p - target;
    const double err = resid.norm();
    if (!std::isfinite(err)) {
      throw TrainingError("cobot_ik_refine: non-finite loss at iteration " +
                          std::to_string(iter));
    }
    result.final_error = err;
    result.iters = iter;
    if (err < cfg.pos_threshold) {
      result.converged = true;
      return result;
    }
    if (iter == cfg.max_iters) break;

    // d position-term / d fk_out
    Eigen::Vector3d d_out;
    if (cfg.squared_position) {
      d_out = 2.0 * resid;
    } else {
      d_out = err > 1e-12 ? Eigen::Vector3d(resid / err) : Eigen::Vector3d::Zero();
    }
    auto back = tape.backward({nn::Tensor::vector({d_out[0], d_out[1], d_out[2]})});
    std::array<double, 4> grad{};
    double dev_sq = 0.0;
    for (int k = 0; k < 4; ++k) {
      grad[std::size_t(k)] = back.input_grads[0][std::size_t(k)];
      const double d = result.q[std::size_t(k)] - q0[std::size_t(k)];
      dev_sq += d * d;
    }
    const double dev = std::sqrt(dev_sq);
    if (dev > 1e-12) {
      for (int k = 0; k < 4; ++k) {
        grad[std::size_t(k)] += cfg.alpha * (result.q[std::size_t(k)] - q0[std::size_t(k)]) / dev;
      }
    }

    double norm_sq = 0.0;
    for (double g : grad) norm_sq += g * g;
    const double norm = std::sqrt(norm_sq);
    if (norm > cfg.clip_norm && norm > 0.0) {
      for (double& g : grad) g *= cfg.clip_norm / norm;
    }

    const double lr = cfg.lr * std::pow(cfg.decay_factor, double(iter / cfg.decay_interval));
    const double corr1 = 1.0 - std::pow(b1, double(iter + 1));
    const double corr2 = 1.0 - std::pow(b2, double(iter + 1));
    for (int k = 0; k < 4; ++k) {
      auto ki = std::size_t(k);
      m[ki] = b1 * m[ki] + (1.0 - b1) * grad[ki];
      v[ki] = b2 * v[ki] + (1.0 - b2) * grad[ki] * grad[ki];
      result.q[ki] -= lr * (m[ki] / corr1) / (std::sqrt(v[ki] / corr2) + eps);
    }
    result.q = clamp4(result.q);
  }
  result.final_error = (fk_at(result.q) - target).norm();
  result.converged = result.final_error < cfg.pos_threshold;
  return result;
}

}  // namespace mimic::retarget
