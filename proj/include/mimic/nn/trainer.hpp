#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mimic/nn/optim.hpp"

namespace mimic::nn {

struct RowDataset {
  std::vector<std::vector<double>> inputs;
  std::vector<std::vector<double>> targets;
  std::size_t size() const { return inputs.size(); }
};

// One entry per sequence; inputs/targets are time-aligned and equally long.
struct SeqDataset {
  struct Sequence {
    std::vector<std::vector<double>> inputs;
    std::vector<std::vector<double>> targets;
  };
  std::vector<Sequence> sequences;
  std::size_t total_steps() const;
};

struct TrainRunReport {
  long steps = 0;
  double final_loss = 0.0;  // mean batch loss over the last recorded window
  std::vector<std::pair<long, double>> loss_samples;
};

// Minibatch MSE training with Adam, step-decay schedule and optional clipping.
// Deterministic given (net seed/params, data, cfg, seed).
TrainRunReport train_rows(Network& net, const RowDataset& data, const TrainConfig& cfg,
                          std::uint64_t seed);

// Full backprop-through-time per sequence; a step consumes batch_size sequences.
TrainRunReport train_sequences(Network& net, const SeqDataset& data, const TrainConfig& cfg,
                               std::uint64_t seed);

}  // namespace mimic::nn
