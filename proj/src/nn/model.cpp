#include "mimic/nn/model.hpp"

#include <cmath>
#include <string>

#include "mimic/util/errors.hpp"
#include "mimic/util/rng.hpp"

namespace mimic::nn {

using util::DimensionError;
using util::TrainingError;

namespace {

// y += W x, W row-major [rows x cols]
void matvec_acc(const Tensor& W, const double* x, double* y) {
  const std::size_t rows = W.shape[0], cols = W.shape[1];
  const double* w = W.values.data();
  for (std::size_t r = 0; r < rows; ++r) {
    double acc = 0.0;
    const double* wr = w + r * cols;
    for (std::size_t c = 0; c < cols; ++c) acc += wr[c] * x[c];
    y[r] += acc;
  }
}

// x_grad += W^T dy
void matvec_t_acc(const Tensor& W, const double* dy, double* x_grad) {
  const std::size_t rows = W.shape[0], cols = W.shape[1];
  const double* w = W.values.data();
  for (std::size_t r = 0; r < rows; ++r) {
    const double g = dy[r];
    if (g == 0.0) continue;
    const double* wr = w + r * cols;
    for (std::size_t c = 0; c < cols; ++c) x_grad[c] += wr[c] * g;
  }
}

// dW += dy x^T
void outer_acc(Tensor& dW, const double* dy, const double* x) {
  const std::size_t rows = dW.shape[0], cols = dW.shape[1];
  double* w = dW.values.data();
  for (std::size_t r = 0; r < rows; ++r) {
    const double g = dy[r];
    if (g == 0.0) continue;
    double* wr = w + r * cols;
    for (std::size_t c = 0; c < cols; ++c) wr[c] += g * x[c];
  }
}

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

bool Tensor::finite() const {
  for (double v : values) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void ModelSpec::validate() const {
  if (layers.empty()) throw DimensionError("model spec has no layers");
  bool seen_dense = false;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& l = layers[i];
    if (l.in_dim == 0 || l.out_dim == 0) {
      throw DimensionError("layer " + std::to_string(i) + " has a zero dimension");
    }
    if (i > 0 && layers[i - 1].out_dim != l.in_dim) {
      throw DimensionError("layer " + std::to_string(i) + " in_dim " +
                           std::to_string(l.in_dim) + " does not chain from layer " +
                           std::to_string(i - 1) + " out_dim " +
                           std::to_string(layers[i - 1].out_dim));
    }
    if (l.kind == LayerKind::Dense) seen_dense = true;
    if (l.kind == LayerKind::Recurrent && seen_dense) {
      throw DimensionError("layer " + std::to_string(i) +
                           ": recurrent layers must precede dense layers");
    }
  }
}

bool ModelSpec::has_recurrent() const {
  for (const auto& l : layers) {
    if (l.kind == LayerKind::Recurrent) return true;
  }
  return false;
}

Network::Network(ModelSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  util::Rng rng(spec_.seed);
  for (const auto& l : spec_.layers) {
    LayerParams p;
    if (l.kind == LayerKind::Dense) {
      Tensor W = Tensor::zeros({l.out_dim, l.in_dim});
      const double bound = std::sqrt(6.0 / double(l.in_dim + l.out_dim));
      for (auto& v : W.values) v = rng.uniform(-bound, bound);
      p.tensors = {std::move(W), Tensor::zeros({l.out_dim})};
    } else {
      const std::size_t H = l.out_dim;
      Tensor W_ih = Tensor::zeros({4 * H, l.in_dim});
      Tensor W_hh = Tensor::zeros({4 * H, H});
      // glorot with per-gate fan-out
      const double b_ih = std::sqrt(6.0 / double(l.in_dim + H));
      const double b_hh = std::sqrt(6.0 / double(H + H));
      for (auto& v : W_ih.values) v = rng.uniform(-b_ih, b_ih);
      for (auto& v : W_hh.values) v = rng.uniform(-b_hh, b_hh);
      Tensor b = Tensor::zeros({4 * H});
      for (std::size_t j = H; j < 2 * H; ++j) b[j] = 1.0;  // forget-gate bias
      p.tensors = {std::move(W_ih), std::move(W_hh), std::move(b)};
    }
    params_.push_back(std::move(p));
  }
}

Network Network::zero_initialized(ModelSpec spec) {
  Network net(std::move(spec));
  for (auto& layer : net.params_) {
    for (auto& t : layer.tensors) {
      std::fill(t.values.begin(), t.values.end(), 0.0);
    }
  }
  return net;
}

NetState Network::initial_state() const {
  NetState s;
  for (const auto& l : spec_.layers) {
    if (l.kind == LayerKind::Recurrent) {
      s.cells.push_back({std::vector<double>(l.out_dim, 0.0),
                         std::vector<double>(l.out_dim, 0.0)});
    }
  }
  return s;
}

Tensor Network::forward(const Tensor& input, NetState* state) const {
  NetState local;
  if (state == nullptr && has_recurrent()) {
    local = initial_state();
    state = &local;
  }
  if (input.size() != input_dim()) {
    throw DimensionError("forward: input size " + std::to_string(input.size()) +
                         " does not match layer 0 in_dim " + std::to_string(input_dim()));
  }
  std::vector<double> x = input.values;
  std::size_t cell_idx = 0;
  for (std::size_t li = 0; li < spec_.layers.size(); ++li) {
    const auto& l = spec_.layers[li];
    const auto& p = params_[li];
    if (l.kind == LayerKind::Dense) {
      std::vector<double> z = p.tensors[1].values;  // bias
      matvec_acc(p.tensors[0], x.data(), z.data());
      if (l.activation == Activation::Relu) {
        for (auto& v : z) v = v > 0.0 ? v : 0.0;
      }
      x = std::move(z);
    } else {
      const std::size_t H = l.out_dim;
      auto& cell = state->cells[cell_idx++];
      std::vector<double> g = p.tensors[2].values;  // bias
      matvec_acc(p.tensors[0], x.data(), g.data());
      matvec_acc(p.tensors[1], cell.h.data(), g.data());
      std::vector<double> h(H), c(H);
      for (std::size_t j = 0; j < H; ++j) {
        const double i_g = sigmoid(g[j]);
        const double f_g = sigmoid(g[H + j]);
        const double g_g = std::tanh(g[2 * H + j]);
        const double o_g = sigmoid(g[3 * H + j]);
        c[j] = f_g * cell.c[j] + i_g * g_g;
        h[j] = o_g * std::tanh(c[j]);
      }
      cell.h = h;
      cell.c = std::move(c);
      x = std::move(h);
    }
  }
  return Tensor::vector(std::move(x));
}

ParamSet Network::zero_grads() const {
  ParamSet g;
  g.reserve(params_.size());
  for (const auto& layer : params_) {
    LayerParams lg;
    for (const auto& t : layer.tensors) lg.tensors.push_back(Tensor::zeros(t.shape));
    g.push_back(std::move(lg));
  }
  return g;
}

std::size_t Network::parameter_count() const {
  std::size_t n = 0;
  for (const auto& layer : params_) {
    for (const auto& t : layer.tensors) n += t.size();
  }
  return n;
}

std::vector<double> Network::flatten_params() const {
  std::vector<double> flat;
  flat.reserve(parameter_count());
  for (const auto& layer : params_) {
    for (const auto& t : layer.tensors) {
      flat.insert(flat.end(), t.values.begin(), t.values.end());
    }
  }
  return flat;
}

void Network::set_params_from_flat(const std::vector<double>& flat) {
  if (flat.size() != parameter_count()) {
    throw DimensionError("set_params_from_flat: size mismatch");
  }
  std::size_t k = 0;
  for (auto& layer : params_) {
    for (auto& t : layer.tensors) {
      for (auto& v : t.values) v = flat[k++];
    }
  }
}

GradientTape::GradientTape(const Network& net)
    : net_(net), state_(net.initial_state()) {}

void GradientTape::reset() {
  state_ = net_.initial_state();
  steps_.clear();
}

Tensor GradientTape::forward(const Tensor& input) {
  if (input.size() != net_.input_dim()) {
    throw DimensionError("tape forward: input size " + std::to_string(input.size()) +
                         " does not match layer 0 in_dim " +
                         std::to_string(net_.input_dim()));
  }
  StepCache step;
  std::vector<double> x = input.values;
  std::size_t cell_idx = 0;
  const auto& layers = net_.spec_.layers;
  for (std::size_t li = 0; li < layers.size(); ++li) {
    const auto& l = layers[li];
    const auto& p = net_.params_[li];
    if (l.kind == LayerKind::Dense) {
      DenseCache cache;
      cache.x = x;
      std::vector<double> z = p.tensors[1].values;
      matvec_acc(p.tensors[0], x.data(), z.data());
      cache.z = z;
      if (l.activation == Activation::Relu) {
        for (auto& v : z) v = v > 0.0 ? v : 0.0;
      }
      step.layers.emplace_back(std::move(cache));
      x = std::move(z);
    } else {
      const std::size_t H = l.out_dim;
      auto& cell = state_.cells[cell_idx++];
      LstmCache cache;
      cache.x = x;
      cache.h_prev = cell.h;
      cache.c_prev = cell.c;
      std::vector<double> g = p.tensors[2].values;
      matvec_acc(p.tensors[0], x.data(), g.data());
      matvec_acc(p.tensors[1], cell.h.data(), g.data());
      cache.i.resize(H);
      cache.f.resize(H);
      cache.g.resize(H);
      cache.o.resize(H);
      cache.c.resize(H);
      cache.tanh_c.resize(H);
      std::vector<double> h(H);
      for (std::size_t j = 0; j < H; ++j) {
        cache.i[j] = sigmoid(g[j]);
        cache.f[j] = sigmoid(g[H + j]);
        cache.g[j] = std::tanh(g[2 * H + j]);
        cache.o[j] = sigmoid(g[3 * H + j]);
        cache.c[j] = cache.f[j] * cell.c[j] + cache.i[j] * cache.g[j];
        cache.tanh_c[j] = std::tanh(cache.c[j]);
        h[j] = cache.o[j] * cache.tanh_c[j];
      }
      cell.h = h;
      cell.c = cache.c;
      step.layers.emplace_back(std::move(cache));
      x = std::move(h);
    }
  }
  steps_.push_back(std::move(step));
  return Tensor::vector(std::move(x));
}

GradientTape::BackwardResult GradientTape::backward(const std::vector<Tensor>& output_grads) {
  if (steps_.empty()) {
    throw TrainingError("backward called without cached forward state");
  }
  if (output_grads.size() != steps_.size()) {
    throw TrainingError("backward: " + std::to_string(output_grads.size()) +
                        " output grads for " + std::to_string(steps_.size()) + " steps");
  }
  const auto& layers = net_.spec_.layers;
  BackwardResult result;
  result.grads = net_.zero_grads();
  result.input_grads.resize(steps_.size());

  // (dh, dc) flowing backward through time, per recurrent layer
  std::size_t n_cells = 0;
  for (const auto& l : layers) n_cells += l.kind == LayerKind::Recurrent ? 1 : 0;
  std::vector<std::vector<double>> dh_next(n_cells), dc_next(n_cells);

  for (std::size_t t = steps_.size(); t-- > 0;) {
    if (output_grads[t].size() != net_.output_dim()) {
      throw TrainingError("backward: output grad size mismatch at step " + std::to_string(t));
    }
    std::vector<double> dy = output_grads[t].values;
    std::size_t cell_idx = n_cells;
    for (std::size_t li = layers.size(); li-- > 0;) {
      const auto& l = layers[li];
      const auto& p = net_.params_[li];
      auto& g = result.grads[li];
      if (l.kind == LayerKind::Dense) {
        const auto& cache = std::get<DenseCache>(steps_[t].layers[li]);
        std::vector<double> dz = std::move(dy);
        if (l.activation == Activation::Relu) {
          for (std::size_t j = 0; j < dz.size(); ++j) {
            if (cache.z[j] <= 0.0) dz[j] = 0.0;
          }
        }
        outer_acc(g.tensors[0], dz.data(), cache.x.data());
        for (std::size_t j = 0; j < dz.size(); ++j) g.tensors[1][j] += dz[j];
        std::vector<double> dx(l.in_dim, 0.0);
        matvec_t_acc(p.tensors[0], dz.data(), dx.data());
        dy = std::move(dx);
      } else {
        --cell_idx;
        const auto& cache = std::get<LstmCache>(steps_[t].layers[li]);
        const std::size_t H = l.out_dim;
        if (dh_next[cell_idx].empty()) {
          dh_next[cell_idx].assign(H, 0.0);
          dc_next[cell_idx].assign(H, 0.0);
        }
        std::vector<double> dgate(4 * H);
        std::vector<double> dc_prev(H);
        for (std::size_t j = 0; j < H; ++j) {
          const double dh = dy[j] + dh_next[cell_idx][j];
          const double do_g = dh * cache.tanh_c[j];
          const double dc = dc_next[cell_idx][j] +
                            dh * cache.o[j] * (1.0 - cache.tanh_c[j] * cache.tanh_c[j]);
          const double di = dc * cache.g[j];
          const double df = dc * cache.c_prev[j];
          const double dg = dc * cache.i[j];
          dc_prev[j] = dc * cache.f[j];
          dgate[j] = di * cache.i[j] * (1.0 - cache.i[j]);
          dgate[H + j] = df * cache.f[j] * (1.0 - cache.f[j]);
          dgate[2 * H + j] = dg * (1.0 - cache.g[j] * cache.g[j]);
          dgate[3 * H + j] = do_g * cache.o[j] * (1.0 - cache.o[j]);
        }
        outer_acc(g.tensors[0], dgate.data(), cache.x.data());
        outer_acc(g.tensors[1], dgate.data(), cache.h_prev.data());
        for (std::size_t j = 0; j < 4 * H; ++j) g.tensors[2][j] += dgate[j];
        std::vector<double> dx(l.in_dim, 0.0);
        matvec_t_acc(p.tensors[0], dgate.data(), dx.data());
        std::vector<double> dh_prev(H, 0.0);
        matvec_t_acc(p.tensors[1], dgate.data(), dh_prev.data());
        dh_next[cell_idx] = std::move(dh_prev);
        dc_next[cell_idx] = std::move(dc_prev);
        dy = std::move(dx);
      }
    }
    result.input_grads[t] = Tensor::vector(std::move(dy));
  }
  reset();
  return result;
}

}  // namespace mimic::nn
