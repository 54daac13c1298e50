#pragma once

// Test-only gradient oracle: central finite differences over a scalar loss.
// Independent of the backprop path it is used to check.

#include <cmath>
#include <functional>
#include <vector>

namespace mimic::test_oracles {

// loss(params_flat) -> scalar; h is the central-difference step
inline std::vector<double> finite_diff_gradient(
    const std::function<double(const std::vector<double>&)>& loss,
    std::vector<double> params, double h = 1e-5) {
  std::vector<double> grad(params.size());
  for (std::size_t k = 0; k < params.size(); ++k) {
    const double orig = params[k];
    params[k] = orig + h;
    const double up = loss(params);
    params[k] = orig - h;
    const double down = loss(params);
    params[k] = orig;
    grad[k] = (up - down) / (2.0 * h);
  }
  return grad;
}

// corrected relative error: tiny values compare as equal
inline double relative_error(double a, double b, double atol = 1e-8) {
  const double num = std::max(0.0, std::abs(a - b) - atol);
  return num / (std::abs(a) + std::abs(b) + atol);
}

}  // namespace mimic::test_oracles
