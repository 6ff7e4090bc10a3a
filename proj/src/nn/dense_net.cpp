#include "samo/nn/dense_net.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "samo/errors.hpp"

namespace samo::nn {

DenseNet::DenseNet(std::vector<int> layer_sizes, Activation hidden)
    : sizes_(std::move(layer_sizes)), hidden_(hidden) {
  layout();
}

DenseNet::DenseNet(std::vector<int> layer_sizes, Activation hidden, Rng& rng)
    : DenseNet(std::move(layer_sizes), hidden) {
  for (std::size_t l = 0; l < layer_count(); ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(sizes_[l]));
    std::uniform_real_distribution<double> dist(-bound, bound);
    const std::size_t end = bias_offset(l) + static_cast<std::size_t>(sizes_[l + 1]);
    for (std::size_t k = weight_offset(l); k < end; ++k) params_[k] = dist(rng);
  }
}

void DenseNet::layout() {
  if (sizes_.size() < 2) throw ConfigError("DenseNet needs at least an input and an output size");
  for (int s : sizes_) {
    if (s <= 0) throw ConfigError("DenseNet layer sizes must be positive");
  }
  offsets_.clear();
  std::size_t total = 0;
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    offsets_.push_back(total);
    total += static_cast<std::size_t>(sizes_[l] + 1) * static_cast<std::size_t>(sizes_[l + 1]);
  }
  params_.assign(total, 0.0);
}

std::vector<double> DenseNet::forward(std::span<const double> input) const {
  Matrix out = forward(Matrix::from_row(input));
  return std::move(out.data);
}

Matrix DenseNet::forward(const Matrix& input, ForwardCache* cache) const {
  if (input.cols != input_size()) {
    throw ConfigError("DenseNet::forward: expected input width " + std::to_string(input_size()) +
                      ", got " + std::to_string(input.cols));
  }
  if (cache) {
    cache->activations.resize(layer_count() + 1);
    cache->activations[0] = input;
  }
  Matrix current = input;
  for (std::size_t l = 0; l < layer_count(); ++l) {
    const auto n_in = static_cast<std::size_t>(sizes_[l]);
    const auto n_out = static_cast<std::size_t>(sizes_[l + 1]);
    Matrix next(input.rows, n_out);
    kernels::dense_forward(params_.data() + weight_offset(l), params_.data() + bias_offset(l),
                           current.data.data(), next.data.data(), input.rows, n_in, n_out,
                           activation_for(l));
    if (cache) cache->activations[l + 1] = next;
    current = std::move(next);
  }
  return current;
}

Matrix DenseNet::backward(const ForwardCache& cache, const Matrix& upstream,
                          std::span<double> param_grad, bool want_input_grad) const {
  if (cache.activations.size() != layer_count() + 1) {
    throw ConfigError("DenseNet::backward: cache does not belong to this network");
  }
  const std::size_t batch = cache.activations[0].rows;
  if (upstream.cols != output_size() || upstream.rows != batch) {
    throw ConfigError("DenseNet::backward: upstream gradient shape mismatch");
  }
  if (!param_grad.empty() && param_grad.size() != param_count()) {
    throw ConfigError("DenseNet::backward: parameter gradient buffer has wrong size");
  }
  Matrix delta = upstream;
  for (std::size_t l = layer_count(); l-- > 0;) {
    const auto n_in = static_cast<std::size_t>(sizes_[l]);
    const auto n_out = static_cast<std::size_t>(sizes_[l + 1]);
    kernels::activation_backward(cache.activations[l + 1].data.data(), delta.data.data(),
                                 delta.data.size(), activation_for(l));
    if (!param_grad.empty()) {
      kernels::dense_backward_params(cache.activations[l].data.data(), delta.data.data(),
                                     param_grad.data() + weight_offset(l),
                                     param_grad.data() + bias_offset(l), batch, n_in, n_out);
    }
    if (l == 0 && !want_input_grad) return {};
    Matrix prev(batch, n_in);
    kernels::dense_backward_input(params_.data() + weight_offset(l), delta.data.data(),
                                  prev.data.data(), batch, n_in, n_out);
    delta = std::move(prev);
  }
  return delta;
}

Gradients DenseNet::backward(std::span<const double> input,
                             std::span<const double> upstream) const {
  ForwardCache cache;
  forward(Matrix::from_row(input), &cache);
  if (upstream.size() != output_size()) {
    throw ConfigError("DenseNet::backward: upstream length must equal output size");
  }
  Gradients g;
  g.params.assign(param_count(), 0.0);
  g.input = backward(cache, Matrix::from_row(upstream), g.params, true).data;
  return g;
}

double DenseNet::checksum() const {
  double sum = 0.0;
  for (std::size_t k = 0; k < params_.size(); ++k) {
    sum += std::abs(params_[k]) * static_cast<double>(k % 97 + 1);
  }
  return sum;
}

void soft_update(DenseNet& target, const DenseNet& online, double tau) {
  if (target.layer_sizes() != online.layer_sizes()) {
    throw ConfigError("soft_update: network shapes differ");
  }
  auto t = target.params();
  auto o = online.params();
  if (tau == 1.0) {
    std::copy(o.begin(), o.end(), t.begin());
    return;
  }
  for (std::size_t k = 0; k < t.size(); ++k) t[k] = tau * o[k] + (1.0 - tau) * t[k];
}

}  // namespace samo::nn
