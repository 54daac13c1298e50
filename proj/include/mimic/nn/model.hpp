#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "mimic/nn/tensor.hpp"

namespace mimic::nn {

enum class LayerKind { Dense, Recurrent };
enum class Activation { Relu, Linear };

struct LayerSpec {
  LayerKind kind = LayerKind::Dense;
  std::size_t in_dim = 0;
  std::size_t out_dim = 0;
  Activation activation = Activation::Linear;  // ignored by recurrent layers
};

// Layer-by-layer architecture plus the init seed. Dimensions must chain and
// recurrent layers must precede dense ones.
struct ModelSpec {
  std::vector<LayerSpec> layers;
  std::uint64_t seed = 0;

  void validate() const;  // throws DimensionError
  std::size_t input_dim() const { return layers.front().in_dim; }
  std::size_t output_dim() const { return layers.back().out_dim; }
  bool has_recurrent() const;

  static LayerSpec dense(std::size_t in, std::size_t out, Activation act) {
    return {LayerKind::Dense, in, out, act};
  }
  static LayerSpec recurrent(std::size_t in, std::size_t out) {
    return {LayerKind::Recurrent, in, out, Activation::Linear};
  }
};

// One layer's parameter (or gradient) tensors.
//   dense:     [W (out x in), b (out)]
//   recurrent: [W_ih (4H x in), W_hh (4H x H), b (4H)]  with gate order i,f,g,o
struct LayerParams {
  std::vector<Tensor> tensors;
};

using ParamSet = std::vector<LayerParams>;

// Hidden (h, c) per recurrent layer, in layer order.
struct NetState {
  struct Cell {
    std::vector<double> h, c;
  };
  std::vector<Cell> cells;
  bool empty() const { return cells.empty(); }
};

class Network {
 public:
  explicit Network(ModelSpec spec);                 // seeded glorot init
  static Network zero_initialized(ModelSpec spec);  // all parameters zero

  const ModelSpec& spec() const { return spec_; }
  std::size_t input_dim() const { return spec_.input_dim(); }
  std::size_t output_dim() const { return spec_.output_dim(); }
  bool has_recurrent() const { return spec_.has_recurrent(); }

  NetState initial_state() const;

  // Pure evaluation. `state` is advanced in place when the model is recurrent;
  // passing nullptr evaluates from a zero hidden state.
  Tensor forward(const Tensor& input, NetState* state = nullptr) const;

  ParamSet& params() { return params_; }
  const ParamSet& params() const { return params_; }
  ParamSet zero_grads() const;

  std::size_t parameter_count() const;
  std::vector<double> flatten_params() const;
  void set_params_from_flat(const std::vector<double>& flat);

 private:
  friend class GradientTape;
  ModelSpec spec_;
  ParamSet params_;
};

// Records forward activations for backprop. One tape instance handles either a
// batch of independent rows (feedforward nets) or one time-ordered sequence
// (recurrent nets); gradients from multiple tapes can be summed by the caller.
class GradientTape {
 public:
  explicit GradientTape(const Network& net);

  Tensor forward(const Tensor& input);

  struct BackwardResult {
    ParamSet grads;                   // summed over all recorded steps
    std::vector<Tensor> input_grads;  // dLoss/dInput per recorded step
  };

  // `output_grads` holds dLoss/dOutput per recorded step, in forward order.
  // Consumes the tape. Throws TrainingError when no forward state is cached.
  BackwardResult backward(const std::vector<Tensor>& output_grads);

  std::size_t steps() const { return steps_.size(); }
  void reset();

 private:
  struct DenseCache {
    std::vector<double> x, z;  // input and pre-activation
  };
  struct LstmCache {
    std::vector<double> x, h_prev, c_prev, i, f, g, o, c, tanh_c;
  };
  using LayerCache = std::variant<DenseCache, LstmCache>;
  struct StepCache {
    std::vector<LayerCache> layers;
  };

  const Network& net_;
  NetState state_;
  std::vector<StepCache> steps_;
};

}  // namespace mimic::nn
