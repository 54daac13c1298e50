#include "mimic/nn/optim.hpp"

#include <cmath>

#include "mimic/util/errors.hpp"

namespace mimic::nn {

using util::DimensionError;
using util::TrainingError;
using util::ValidationError;

void TrainConfig::validate() const {
  if (!(base_lr > 0.0)) throw ValidationError("train config: base_lr must be > 0");
  if (max_steps <= 0) throw ValidationError("train config: max_steps must be > 0");
  if (!(decay_factor > 0.0 && decay_factor <= 1.0)) {
    throw ValidationError("train config: decay_factor must be in (0, 1]");
  }
  if (decay_interval <= 0) throw ValidationError("train config: decay_interval must be > 0");
  if (clip_norm && !(*clip_norm > 0.0)) {
    throw ValidationError("train config: clip_norm must be > 0 when present");
  }
  if (batch_size <= 0) throw ValidationError("train config: batch_size must be > 0");
}

double lr_at(long step, const TrainConfig& cfg) {
  const long k = step / cfg.decay_interval;
  return cfg.base_lr * std::pow(cfg.decay_factor, double(k));
}

AdamState AdamState::like(const Network& net) {
  AdamState s;
  s.first_moment = net.zero_grads();
  s.second_moment = net.zero_grads();
  return s;
}

void adam_step(ParamSet& params, const ParamSet& grads, AdamState& state, double lr) {
  if (params.size() != grads.size()) throw DimensionError("adam_step: layer count mismatch");
  state.step += 1;
  const double b1 = state.beta1, b2 = state.beta2;
  const double corr1 = 1.0 - std::pow(b1, double(state.step));
  const double corr2 = 1.0 - std::pow(b2, double(state.step));
  for (std::size_t li = 0; li < params.size(); ++li) {
    for (std::size_t ti = 0; ti < params[li].tensors.size(); ++ti) {
      auto& p = params[li].tensors[ti].values;
      const auto& g = grads[li].tensors[ti].values;
      auto& m = state.first_moment[li].tensors[ti].values;
      auto& v = state.second_moment[li].tensors[ti].values;
      if (p.size() != g.size()) throw DimensionError("adam_step: tensor shape mismatch");
      for (std::size_t k = 0; k < p.size(); ++k) {
        if (!std::isfinite(g[k])) {
          throw TrainingError("adam_step: non-finite gradient encountered");
        }
        m[k] = b1 * m[k] + (1.0 - b1) * g[k];
        v[k] = b2 * v[k] + (1.0 - b2) * g[k] * g[k];
        const double m_hat = m[k] / corr1;
        const double v_hat = v[k] / corr2;
        p[k] -= lr * m_hat / (std::sqrt(v_hat) + state.epsilon);
      }
    }
  }
}

double grad_global_norm(const ParamSet& grads) {
  double sq = 0.0;
  for (const auto& layer : grads) {
    for (const auto& t : layer.tensors) {
      for (double v : t.values) sq += v * v;
    }
  }
  return std::sqrt(sq);
}

double clip_grad_norm(ParamSet& grads, double max_norm) {
  const double norm = grad_global_norm(grads);
  if (norm > max_norm && norm > 0.0) {
    scale_grads(grads, max_norm / norm);
  }
  return norm;
}

std::pair<double, Tensor> mse_loss(const Tensor& pred, const Tensor& target) {
  if (!pred.shape_equals(target)) throw DimensionError("mse_loss: shape mismatch");
  const std::size_t n = pred.size();
  Tensor grad = Tensor::zeros(pred.shape);
  double loss = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double d = pred[k] - target[k];
    loss += d * d;
    grad[k] = 2.0 * d / double(n);
  }
  return {loss / double(n), grad};
}

void scale_grads(ParamSet& grads, double factor) {
  for (auto& layer : grads) {
    for (auto& t : layer.tensors) {
      for (auto& v : t.values) v *= factor;
    }
  }
}

void accumulate_grads(ParamSet& into, const ParamSet& from) {
  for (std::size_t li = 0; li < into.size(); ++li) {
    for (std::size_t ti = 0; ti < into[li].tensors.size(); ++ti) {
      auto& a = into[li].tensors[ti].values;
      const auto& b = from[li].tensors[ti].values;
      for (std::size_t k = 0; k < a.size(); ++k) a[k] += b[k];
    }
  }
}

}  // namespace mimic::nn
