#pragma once

#include <span>
#include <vector>

#include "samo/action_space.hpp"
#include "samo/nn/adam.hpp"
#include "samo/nn/dense_net.hpp"
#include "samo/policy.hpp"
#include "samo/replay_buffer.hpp"

namespace samo::sac {

struct SacConfig {
  double lr = 3e-4;
  double gamma = 0.99;
  double tau = 0.005;
  int batch = 16;
  std::vector<int> hidden = {64, 64};
  double initial_alpha = 1.0;
  // Lower bound is exclusive: alpha stays strictly above it.
  double alpha_floor = 1e-4;

  friend bool operator==(const SacConfig&, const SacConfig&) = default;
};

// Soft Bellman target for one transition.
double soft_q_target(double reward, bool done, double gamma, double min_next_q, double alpha,
                     double next_log_prob);

// Twin-critic soft actor-critic with target networks and a learned
// temperature. Continuous actions use a squashed Gaussian and the
// reparameterization trick; discrete actions use exact expectations.
class SacLearner {
 public:
  SacLearner(ActionSpace space, int obs_dim, SacConfig config, Rng& init_rng);

  const ActionSpace& action_space() const { return space_; }
  const SacConfig& config() const { return config_; }
  int obs_dim() const { return obs_dim_; }

  double alpha() const;
  void set_alpha(double alpha);
  // -(action dimension); discrete spaces count as one dimension.
  double target_entropy() const { return target_entropy_; }

  const policy::PolicyHead& policy() const { return policy_; }
  policy::PolicyHead& policy() { return policy_; }
  const nn::DenseNet& q1() const { return q1_; }
  const nn::DenseNet& q2() const { return q2_; }
  const nn::DenseNet& q1_target() const { return q1_target_; }
  const nn::DenseNet& q2_target() const { return q2_target_; }
  nn::DenseNet& q1() { return q1_; }
  nn::DenseNet& q2() { return q2_; }
  nn::DenseNet& q1_target() { return q1_target_; }
  nn::DenseNet& q2_target() { return q2_target_; }
  void swap_critics();

  // Q(s, .) for a batch: one column (continuous, given actions) or one column
  // per discrete action (actions ignored).
  nn::Matrix q_values(const nn::DenseNet& q, const nn::Matrix& states,
                      const nn::Matrix& actions) const;

  // y = r + gamma (1 - done) (min target Q(s', a') - alpha log pi(a'|s')),
  // a' drawn fresh from the current policy (exact expectation if discrete).
  std::vector<double> q_targets(const TransitionBatch& batch, Rng& rng) const;

  // Mean squared TD residual, averaged over both critics.
  double update_critics(const TransitionBatch& batch, Rng& rng);
  // E[alpha log pi(a|s) - min Q(s, a)] before the step.
  double update_policy(const TransitionBatch& batch, Rng& rng);
  // Descends J(alpha) = E[-alpha log pi - alpha H]; returns the new alpha.
  double update_alpha(const TransitionBatch& batch, Rng& rng);
  // Same step from a precomputed dJ/dalpha = E[-log pi] - H.
  double apply_alpha_gradient(double dj_dalpha);
  void soft_update_targets();
  void soft_update_targets(double tau);

  bool is_mature(double alpha_min) const { return alpha() < alpha_min; }

  // V(s) = E_a[min Q(s, a) - alpha log pi(a|s)]; Monte-Carlo for continuous.
  double state_value(std::span<const double> state, Rng& rng, int samples = 8) const;

 private:
  ActionSpace space_;
  int obs_dim_;
  SacConfig config_;
  double target_entropy_;

  policy::PolicyHead policy_;
  nn::DenseNet q1_, q2_, q1_target_, q2_target_;
  nn::AdamState policy_opt_, q1_opt_, q2_opt_, alpha_opt_;
  double log_alpha_;
};

}  // namespace samo::sac
