#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "samo/nn/kernels.hpp"
#include "samo/nn/matrix.hpp"
#include "samo/rng.hpp"

namespace samo::nn {

// Post-activation outputs of every layer for one batch; activations[0] is the
// input. Produced by DenseNet::forward and consumed by DenseNet::backward.
struct ForwardCache {
  std::vector<Matrix> activations;
};

struct Gradients {
  std::vector<double> params;
  std::vector<double> input;
};

// Fully connected network with a shared hidden activation and an identity
// output layer. Parameters live in one flat buffer, layer by layer: the
// n_in x n_out weight block (input-major) followed by n_out biases.
class DenseNet {
 public:
  DenseNet() = default;
  // Uniform(-1/sqrt(n_in), 1/sqrt(n_in)) initialization.
  DenseNet(std::vector<int> layer_sizes, Activation hidden, Rng& rng);
  // Zero parameters; used when loading.
  DenseNet(std::vector<int> layer_sizes, Activation hidden);

  const std::vector<int>& layer_sizes() const { return sizes_; }
  Activation hidden_activation() const { return hidden_; }
  std::size_t input_size() const { return static_cast<std::size_t>(sizes_.front()); }
  std::size_t output_size() const { return static_cast<std::size_t>(sizes_.back()); }
  std::size_t layer_count() const { return sizes_.size() - 1; }

  std::span<double> params() { return params_; }
  std::span<const double> params() const { return params_; }
  std::size_t param_count() const { return params_.size(); }

  // Offsets of layer l's weight block and bias vector inside params().
  std::size_t weight_offset(std::size_t layer) const { return offsets_[layer]; }
  std::size_t bias_offset(std::size_t layer) const {
    return offsets_[layer] + static_cast<std::size_t>(sizes_[layer]) * sizes_[layer + 1];
  }

  std::vector<double> forward(std::span<const double> input) const;
  Matrix forward(const Matrix& input, ForwardCache* cache = nullptr) const;

  // Accumulates (+=) parameter gradients into param_grad, which must be empty
  // (skip parameter gradients) or param_count() long. Returns d(loss)/d(input)
  // when want_input_grad is set, otherwise an empty matrix.
  Matrix backward(const ForwardCache& cache, const Matrix& upstream, std::span<double> param_grad,
                  bool want_input_grad = true) const;

  Gradients backward(std::span<const double> input, std::span<const double> upstream) const;

  // Sum of |p| weighted by position; cheap fingerprint for immutability checks.
  double checksum() const;

  friend bool operator==(const DenseNet&, const DenseNet&) = default;

 private:
  void layout();
  Activation activation_for(std::size_t layer) const {
    return layer + 1 == layer_count() ? Activation::kIdentity : hidden_;
  }

  std::vector<int> sizes_;
  Activation hidden_ = Activation::kTanh;
  std::vector<std::size_t> offsets_;
  std::vector<double> params_;
};

// Polyak averaging: target <- tau * online + (1 - tau) * target.
void soft_update(DenseNet& target, const DenseNet& online, double tau);

}  // namespace samo::nn
