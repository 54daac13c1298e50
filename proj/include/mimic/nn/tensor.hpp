#pragma once

#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <vector>

namespace mimic::nn {

// Dense row-major tensor of doubles. Shapes here never exceed rank 2.
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<double> values;

  Tensor() = default;
  Tensor(std::vector<std::size_t> s, std::vector<double> v)
      : shape(std::move(s)), values(std::move(v)) {}

  static Tensor zeros(std::vector<std::size_t> s) {
    std::size_t n = 1;
    for (auto d : s) n *= d;
    return Tensor(std::move(s), std::vector<double>(n, 0.0));
  }
  static Tensor vector(std::vector<double> v) {
    const std::size_t n = v.size();
    return Tensor({n}, std::move(v));
  }

  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }

  // rank-2 accessor, row-major
  double& at(std::size_t r, std::size_t c) { return values[r * shape[1] + c]; }
  double at(std::size_t r, std::size_t c) const { return values[r * shape[1] + c]; }

  bool shape_equals(const Tensor& other) const { return shape == other.shape; }
  bool finite() const;
};

}  // namespace mimic::nn
