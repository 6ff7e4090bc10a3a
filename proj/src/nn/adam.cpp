#include "samo/nn/adam.hpp"

#include <cmath>

#include "samo/errors.hpp"

namespace samo::nn {

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
               double lr) {
  if (params.size() != grads.size()) throw ConfigError("adam_step: gradient size mismatch");
  if (!(lr > 0.0)) throw ConfigError("adam_step: learning rate must be positive");
  if (state.m.empty()) {
    state.m.assign(params.size(), 0.0);
    state.v.assign(params.size(), 0.0);
  }
  if (state.m.size() != params.size()) throw ConfigError("adam_step: optimizer state size mismatch");
  for (double g : grads) {
    if (!std::isfinite(g)) throw NumericError("adam_step: non-finite gradient");
  }

  ++state.step;
  const double b1 = state.beta1;
  const double b2 = state.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(state.step));
  for (std::size_t k = 0; k < params.size(); ++k) {
    const double g = grads[k];
    state.m[k] = b1 * state.m[k] + (1.0 - b1) * g;
    state.v[k] = b2 * state.v[k] + (1.0 - b2) * g * g;
    const double m_hat = state.m[k] / c1;
    const double v_hat = state.v[k] / c2;
    params[k] -= lr * m_hat / (std::sqrt(v_hat) + state.eps);
  }
}

}  // namespace samo::nn
