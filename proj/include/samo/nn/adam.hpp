#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace samo::nn {

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::int64_t step = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  AdamState() = default;
  explicit AdamState(std::size_t n, double b1 = 0.9, double b2 = 0.999, double e = 1e-8)
      : m(n, 0.0), v(n, 0.0), beta1(b1), beta2(b2), eps(e) {}
};

// Bias-corrected Adam update. Throws NumericError and leaves everything
// untouched if any gradient is non-finite.
void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
               double lr);

}  // namespace samo::nn
