#include "mimic/nn/trainer.hpp"

#include <numeric>

#include "mimic/util/errors.hpp"
#include "mimic/util/rng.hpp"

namespace mimic::nn {

using util::ValidationError;

namespace {

// running record of batch losses, sampled sparsely for reports
struct LossLog {
  std::vector<std::pair<long, double>> samples;
  double window_sum = 0.0;
  long window_n = 0;

  void push(long step, double loss) {
    window_sum += loss;
    window_n += 1;
    if (step % 100 == 0 || samples.empty()) samples.emplace_back(step, loss);
  }
  double window_mean() const { return window_n > 0 ? window_sum / double(window_n) : 0.0; }
  void roll() {
    window_sum = 0.0;
    window_n = 0;
  }
};

}  // namespace

std::size_t SeqDataset::total_steps() const {
  std::size_t n = 0;
  for (const auto& s : sequences) n += s.inputs.size();
  return n;
}

TrainRunReport train_rows(Network& net, const RowDataset& data, const TrainConfig& cfg,
                          std::uint64_t seed) {
  cfg.validate();
  if (data.size() == 0) throw ValidationError("train_rows: empty dataset");
  if (data.inputs.size() != data.targets.size()) {
    throw ValidationError("train_rows: inputs/targets length mismatch");
  }
  util::Rng rng(seed);
  AdamState adam = AdamState::like(net);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  std::size_t cursor = 0;

  LossLog log;
  const long B = std::min<long>(cfg.batch_size, long(data.size()));
  for (long step = 0; step < cfg.max_steps; ++step) {
    GradientTape tape(net);
    std::vector<Tensor> grads;
    grads.reserve(std::size_t(B));
    double batch_loss = 0.0;
    for (long b = 0; b < B; ++b) {
      if (cursor == order.size()) {
        rng.shuffle(order);
        cursor = 0;
      }
      const auto& x = data.inputs[order[cursor]];
      const auto& y = data.targets[order[cursor]];
      ++cursor;
      Tensor pred = tape.forward(Tensor::vector(std::vector<double>(x)));
      auto [loss, g] = mse_loss(pred, Tensor::vector(std::vector<double>(y)));
      batch_loss += loss / double(B);
      for (auto& v : g.values) v /= double(B);
      grads.push_back(std::move(g));
    }
    auto back = tape.backward(grads);
    if (cfg.clip_norm) clip_grad_norm(back.grads, *cfg.clip_norm);
    adam_step(net.params(), back.grads, adam, lr_at(step, cfg));
    if (step == cfg.max_steps - 200 || (cfg.max_steps < 200 && step == 0)) log.roll();
    log.push(step, batch_loss);
  }
  return {cfg.max_steps, log.window_mean(), std::move(log.samples)};
}

TrainRunReport train_sequences(Network& net, const SeqDataset& data, const TrainConfig& cfg,
                               std::uint64_t seed) {
  cfg.validate();
  if (data.sequences.empty()) throw ValidationError("train_sequences: empty dataset");
  for (const auto& s : data.sequences) {
    if (s.inputs.empty() || s.inputs.size() != s.targets.size()) {
      throw ValidationError("train_sequences: malformed sequence");
    }
  }
  util::Rng rng(seed);
  AdamState adam = AdamState::like(net);
  std::vector<std::size_t> order(data.sequences.size());
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  std::size_t cursor = 0;

  LossLog log;
  const long B = std::min<long>(cfg.batch_size, long(data.sequences.size()));
  for (long step = 0; step < cfg.max_steps; ++step) {
    ParamSet total = net.zero_grads();
    double batch_loss = 0.0;
    std::size_t batch_steps = 0;
    std::vector<std::size_t> chosen;
    for (long b = 0; b < B; ++b) {
      if (cursor == order.size()) {
        rng.shuffle(order);
        cursor = 0;
      }
      chosen.push_back(order[cursor++]);
      batch_steps += data.sequences[chosen.back()].inputs.size();
    }
    for (std::size_t si : chosen) {
      const auto& seq = data.sequences[si];
      GradientTape tape(net);
      std::vector<Tensor> grads;
      grads.reserve(seq.inputs.size());
      for (std::size_t t = 0; t < seq.inputs.size(); ++t) {
        Tensor pred = tape.forward(Tensor::vector(std::vector<double>(seq.inputs[t])));
        auto [loss, g] = mse_loss(pred, Tensor::vector(std::vector<double>(seq.targets[t])));
        batch_loss += loss / double(batch_steps);
        for (auto& v : g.values) v /= double(batch_steps);
        grads.push_back(std::move(g));
      }
      auto back = tape.backward(grads);
      accumulate_grads(total, back.grads);
    }
    if (cfg.clip_norm) clip_grad_norm(total, *cfg.clip_norm);
    adam_step(net.params(), total, adam, lr_at(step, cfg));
    if (step == cfg.max_steps - 200 || (cfg.max_steps < 200 && step == 0)) log.roll();
    log.push(step, batch_loss);
  }
  return {cfg.max_steps, log.window_mean(), std::move(log.samples)};
}

}  // namespace mimic::nn
