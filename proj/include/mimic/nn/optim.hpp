#pragma once

#include <optional>
#include <utility>

#include "mimic/nn/model.hpp"

namespace mimic::nn {

struct TrainConfig {
  double base_lr = 0.001;
  long max_steps = 10000;
  double decay_factor = 1.0;  // 1.0 disables decay
  long decay_interval = 1000;
  std::optional<double> clip_norm;
  long batch_size = 32;

  void validate() const;  // throws ValidationError
};

// step-decay schedule: base_lr * decay_factor^floor(step / decay_interval)
double lr_at(long step, const TrainConfig& cfg);

struct AdamState {
  long step = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  ParamSet first_moment;
  ParamSet second_moment;

  static AdamState like(const Network& net);
};

// bias-corrected Adam update; throws TrainingError on non-finite gradients
void adam_step(ParamSet& params, const ParamSet& grads, AdamState& state, double lr);

double grad_global_norm(const ParamSet& grads);

// scales grads so the global L2 norm is at most max_norm; returns pre-clip norm
double clip_grad_norm(ParamSet& grads, double max_norm);

// mean squared error plus its gradient wrt pred: 2 (pred - target) / N
std::pair<double, Tensor> mse_loss(const Tensor& pred, const Tensor& target);

void scale_grads(ParamSet& grads, double factor);
void accumulate_grads(ParamSet& into, const ParamSet& from);

}  // namespace mimic::nn
