#pragma once

#include <span>
#include <variant>
#include <vector>

#include "samo/action_space.hpp"
#include "samo/nn/dense_net.hpp"
#include "samo/rng.hpp"

namespace samo::policy {

inline constexpr double kLogStdMin = -20.0;
inline constexpr double kLogStdMax = 2.0;
// Floor inside log(1 - a^2) so saturated actions keep a finite density.
inline constexpr double kTanhEps = 1e-6;

struct ActionSample {
  std::vector<double> action;
  double log_prob = 0.0;
};

// tanh-squashed diagonal Gaussian. The backing net emits (mean, log_std) per
// action dimension, means first.
class GaussianHead {
 public:
  GaussianHead(int obs_dim, int action_dim, const std::vector<int>& hidden, Rng& rng);
  explicit GaussianHead(nn::DenseNet net);

  int action_dim() const { return static_cast<int>(net_.output_size() / 2); }
  const nn::DenseNet& net() const { return net_; }
  nn::DenseNet& net() { return net_; }

  // action = tanh(mean + std * noise)
  ActionSample sample(std::span<const double> state, std::span<const double> noise) const;
  ActionSample sample(std::span<const double> state, Rng& rng) const;
  // Throws DomainError unless every |action| < 1.
  double log_prob(std::span<const double> state, std::span<const double> action) const;
  std::vector<double> greedy(std::span<const double> state) const;
  // Monte-Carlo estimate of -E[log pi(a|s)].
  double entropy_estimate(std::span<const double> state, int n_samples, Rng& rng) const;

  // Reparameterized batch evaluation, kept for the backward pass.
  struct Batch {
    nn::ForwardCache cache;
    nn::Matrix noise;
    nn::Matrix std;
    nn::Matrix action;
    std::vector<double> log_prob;
    std::vector<unsigned char> clamped;  // per (row, dim): log_std hit a bound
  };
  Batch rsample(const nn::Matrix& states, const nn::Matrix& noise) const;

  // Accumulates parameter gradients of a loss with partials d_action (rows x
  // dim) and d_log_prob (rows) with respect to the sampled quantities.
  void backward(const Batch& batch, const nn::Matrix& d_action, std::span<const double> d_log_prob,
                std::span<double> param_grad) const;

 private:
  nn::DenseNet net_;
};

// Softmax over one logit per discrete action.
class CategoricalHead {
 public:
  CategoricalHead(int obs_dim, int n_actions, const std::vector<int>& hidden, Rng& rng);
  explicit CategoricalHead(nn::DenseNet net);

  int n_actions() const { return static_cast<int>(net_.output_size()); }
  const nn::DenseNet& net() const { return net_; }
  nn::DenseNet& net() { return net_; }

  std::vector<double> probabilities(std::span<const double> state) const;
  // Inverse-CDF sampling with a uniform draw in [0, 1).
  ActionSample sample(std::span<const double> state, double uniform_draw) const;
  ActionSample sample(std::span<const double> state, Rng& rng) const;
  double log_prob(std::span<const double> state, int action) const;
  std::vector<double> greedy(std::span<const double> state) const;
  // Exact entropy.
  double entropy(std::span<const double> state) const;

  struct Batch {
    nn::ForwardCache cache;
    nn::Matrix probs;
    nn::Matrix log_probs;
  };
  Batch evaluate(const nn::Matrix& states) const;
  void backward(const Batch& batch, const nn::Matrix& d_logits, std::span<double> param_grad) const;

 private:
  nn::DenseNet net_;
};

// Numerically stable log-softmax of one row.
void log_softmax(std::span<const double> logits, std::span<double> out);

using PolicyHead = std::variant<GaussianHead, CategoricalHead>;

PolicyHead make_head(const ActionSpace& space, int obs_dim, const std::vector<int>& hidden, Rng& rng);
const nn::DenseNet& head_net(const PolicyHead& head);
nn::DenseNet& head_net(PolicyHead& head);
ActionSpace head_space(const PolicyHead& head);

// Stochastic draw, or the mode (tanh(mean) / argmax) when greedy is set.
ActionSample act(const PolicyHead& head, std::span<const double> state, Rng& rng, bool greedy);
double entropy_estimate(const PolicyHead& head, std::span<const double> state, int n_samples,
                        Rng& rng);

}  // namespace samo::policy
