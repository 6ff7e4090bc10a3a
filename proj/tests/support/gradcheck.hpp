#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "samo/nn/dense_net.hpp"
#include "samo/rng.hpp"

namespace samo::testing {

// Loss = sum over rows and outputs of coeff * output, so its gradient is
// the network's backward pass with the coefficients as upstream.
inline double weighted_sum(const nn::DenseNet& net, const nn::Matrix& in, const nn::Matrix& coeff) {
  const nn::Matrix out = net.forward(in);
  double s = 0.0;
  for (std::size_t i = 0; i < out.data.size(); ++i) s += out.data[i] * coeff.data[i];
  return s;
}

struct GradCheck {
  double max_rel_error = 0.0;
  std::size_t params = 0;
};

// Central differences with step h; relative error uses max(|a|, |n|, floor).
inline GradCheck check_gradients(nn::DenseNet net, const nn::Matrix& in, const nn::Matrix& coeff,
                                 double h = 1e-5, double floor = 1e-6) {
  nn::ForwardCache cache;
  net.forward(in, &cache);
  std::vector<double> analytic(net.param_count(), 0.0);
  net.backward(cache, coeff, analytic, false);

  GradCheck r;
  r.params = net.param_count();
  auto p = net.params();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double keep = p[i];
    p[i] = keep + h;
    const double up = weighted_sum(net, in, coeff);
    p[i] = keep - h;
    const double down = weighted_sum(net, in, coeff);
    p[i] = keep;
    const double numeric = (up - down) / (2.0 * h);
    const double denom = std::max({std::abs(analytic[i]), std::abs(numeric), floor});
    r.max_rel_error = std::max(r.max_rel_error, std::abs(analytic[i] - numeric) / denom);
  }
  return r;
}

// A random small net with random inputs and coefficients.
struct RandomCase {
  nn::DenseNet net;
  nn::Matrix in;
  nn::Matrix coeff;
};

inline RandomCase random_case(Rng& rng) {
  std::uniform_int_distribution<int> width(1, 6), depth(1, 3), rows(1, 4), act(0, 2);
  std::vector<int> sizes;
  const int layers = depth(rng);
  for (int l = 0; l <= layers; ++l) sizes.push_back(width(rng));
  const auto a = static_cast<nn::Activation>(act(rng));
  RandomCase c{nn::DenseNet(sizes, a, rng), nn::Matrix(rows(rng), sizes.front()), {}};
  c.coeff = nn::Matrix(c.in.rows, sizes.back());
  for (auto& x : c.in.data) x = 2.0 * uniform01(rng) - 1.0;
  for (auto& x : c.coeff.data) x = 2.0 * uniform01(rng) - 1.0;
  return c;
}

}  // namespace samo::testing
