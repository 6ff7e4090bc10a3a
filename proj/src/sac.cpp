#include "samo/sac.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "samo/errors.hpp"

namespace samo::sac {

namespace {

std::vector<int> with_io(int in, const std::vector<int>& hidden, int out) {
  std::vector<int> sizes{in};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(out);
  return sizes;
}

nn::Matrix standard_normal_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  nn::Matrix m(rows, cols);
  for (double& v : m.data) v = standard_normal(rng);
  return m;
}

void check_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw NumericError(std::string("non-finite ") + what);
}

}  // namespace

double soft_q_target(double reward, bool done, double gamma, double min_next_q, double alpha,
                     double next_log_prob) {
  if (done) return reward;
  return reward + gamma * (min_next_q - alpha * next_log_prob);
}

SacLearner::SacLearner(ActionSpace space, int obs_dim, SacConfig config, Rng& init_rng)
    : space_(space),
      obs_dim_(obs_dim),
      config_(std::move(config)),
      target_entropy_(-static_cast<double>(space.continuous() ? space.size : 1)),
      policy_(policy::make_head(space, obs_dim, config_.hidden, init_rng)) {
  if (obs_dim <= 0) throw ConfigError("SacLearner: observation dimension must be positive");
  if (!(config_.lr > 0.0)) throw ConfigError("SacLearner: lr must be positive");
  if (!(config_.gamma > 0.0 && config_.gamma <= 1.0)) throw ConfigError("SacLearner: gamma must be in (0, 1]");
  if (!(config_.tau >= 0.0 && config_.tau <= 1.0)) throw ConfigError("SacLearner: tau must be in [0, 1]");
  if (config_.batch <= 0) throw ConfigError("SacLearner: batch must be positive");
  if (!(config_.initial_alpha > config_.alpha_floor && config_.initial_alpha <= 1.0)) {
    throw ConfigError("SacLearner: initial alpha must lie in (floor, 1]");
  }
  const auto q_sizes = space.continuous() ? with_io(obs_dim + space.size, config_.hidden, 1)
                                          : with_io(obs_dim, config_.hidden, space.size);
  q1_ = nn::DenseNet(q_sizes, nn::Activation::kRelu, init_rng);
  q2_ = nn::DenseNet(q_sizes, nn::Activation::kRelu, init_rng);
  q1_target_ = q1_;
  q2_target_ = q2_;
  policy_opt_ = nn::AdamState(policy::head_net(policy_).param_count());
  q1_opt_ = nn::AdamState(q1_.param_count());
  q2_opt_ = nn::AdamState(q2_.param_count());
  // No momentum on the temperature: every step moves alpha against the sign
  // of the current batch gradient.
  alpha_opt_ = nn::AdamState(1, 0.0, 0.999, 1e-8);
  log_alpha_ = std::log(config_.initial_alpha);
}

double SacLearner::alpha() const { return std::exp(log_alpha_); }

void SacLearner::set_alpha(double alpha) {
  if (!(alpha > config_.alpha_floor && alpha <= 1.0)) {
    throw ConfigError("SacLearner::set_alpha: alpha must lie in (floor, 1]");
  }
  log_alpha_ = std::log(alpha);
}

void SacLearner::swap_critics() {
  std::swap(q1_, q2_);
  std::swap(q1_target_, q2_target_);
  std::swap(q1_opt_, q2_opt_);
}

nn::Matrix SacLearner::q_values(const nn::DenseNet& q, const nn::Matrix& states,
                                const nn::Matrix& actions) const {
  if (space_.continuous()) return q.forward(nn::hconcat(states, actions));
  return q.forward(states);
}

std::vector<double> SacLearner::q_targets(const TransitionBatch& batch, Rng& rng) const {
  const std::size_t n = batch.size();
  if (n == 0) throw ConfigError("q_targets: empty batch");
  const double a = alpha();
  std::vector<double> y(n);
  if (const auto* g = std::get_if<policy::GaussianHead>(&policy_)) {
    const auto noise = standard_normal_matrix(n, static_cast<std::size_t>(space_.size), rng);
    const auto next = g->rsample(batch.next_states, noise);
    const auto t1 = q_values(q1_target_, batch.next_states, next.action);
    const auto t2 = q_values(q2_target_, batch.next_states, next.action);
    for (std::size_t r = 0; r < n; ++r) {
      y[r] = soft_q_target(batch.rewards[r], batch.dones[r] != 0.0, config_.gamma,
                           std::min(t1(r, 0), t2(r, 0)), a, next.log_prob[r]);
    }
    return y;
  }
  const auto& c = std::get<policy::CategoricalHead>(policy_);
  const auto next = c.evaluate(batch.next_states);
  const auto t1 = q1_target_.forward(batch.next_states);
  const auto t2 = q2_target_.forward(batch.next_states);
  for (std::size_t r = 0; r < n; ++r) {
    if (batch.dones[r] != 0.0) {
      y[r] = batch.rewards[r];
      continue;
    }
    double v = 0.0;
    for (std::size_t k = 0; k < next.probs.cols; ++k) {
      v += next.probs(r, k) * (std::min(t1(r, k), t2(r, k)) - a * next.log_probs(r, k));
    }
    y[r] = batch.rewards[r] + config_.gamma * v;
  }
  return y;
}

double SacLearner::update_critics(const TransitionBatch& batch, Rng& rng) {
  const std::size_t n = batch.size();
  const auto y = q_targets(batch, rng);
  const nn::Matrix input =
      space_.continuous() ? nn::hconcat(batch.states, batch.actions) : batch.states;

  double total = 0.0;
  auto regress = [&](nn::DenseNet& q, nn::AdamState& opt) {
    nn::ForwardCache cache;
    const nn::Matrix out = q.forward(input, &cache);
    nn::Matrix upstream(n, out.cols);
    double loss = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      const std::size_t col = space_.continuous() ? 0 : static_cast<std::size_t>(batch.actions(r, 0));
      const double residual = out(r, col) - y[r];
      loss += residual * residual;
      upstream(r, col) = 2.0 * residual / static_cast<double>(n);
    }
    loss /= static_cast<double>(n);
    check_finite(loss, "critic loss");
    std::vector<double> grad(q.param_count(), 0.0);
    q.backward(cache, upstream, grad, false);
    nn::adam_step(q.params(), grad, opt, config_.lr);
    total += loss;
  };
  regress(q1_, q1_opt_);
  regress(q2_, q2_opt_);
  return total / 2.0;
}

double SacLearner::update_policy(const TransitionBatch& batch, Rng& rng) {
  const std::size_t n = batch.size();
  const double a = alpha();
  const double inv_n = 1.0 / static_cast<double>(n);
  auto& net = policy::head_net(policy_);
  std::vector<double> grad(net.param_count(), 0.0);
  double loss = 0.0;

  if (auto* g = std::get_if<policy::GaussianHead>(&policy_)) {
    const auto dim = static_cast<std::size_t>(space_.size);
    const auto noise = standard_normal_matrix(n, dim, rng);
    const auto sample = g->rsample(batch.states, noise);
    const nn::Matrix input = nn::hconcat(batch.states, sample.action);
    nn::ForwardCache c1, c2;
    const auto v1 = q1_.forward(input, &c1);
    const auto v2 = q2_.forward(input, &c2);
    // d(-min Q)/dQ_k routed to whichever critic is smaller per row.
    nn::Matrix up1(n, 1), up2(n, 1);
    for (std::size_t r = 0; r < n; ++r) {
      const bool first = v1(r, 0) <= v2(r, 0);
      (first ? up1 : up2)(r, 0) = -inv_n;
      loss += a * sample.log_prob[r] - std::min(v1(r, 0), v2(r, 0));
    }
    const auto din1 = q1_.backward(c1, up1, {}, true);
    const auto din2 = q2_.backward(c2, up2, {}, true);
    nn::Matrix d_action(n, dim);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t d = 0; d < dim; ++d) {
        d_action(r, d) = din1(r, obs_dim_ + d) + din2(r, obs_dim_ + d);
      }
    }
    std::vector<double> d_log_prob(n, a * inv_n);
    g->backward(sample, d_action, d_log_prob, grad);
  } else {
    auto& c = std::get<policy::CategoricalHead>(policy_);
    const auto eval = c.evaluate(batch.states);
    const auto v1 = q1_.forward(batch.states);
    const auto v2 = q2_.forward(batch.states);
    nn::Matrix d_logits(n, eval.probs.cols);
    for (std::size_t r = 0; r < n; ++r) {
      // L = sum_k p_k f_k with f_k = alpha log p_k - min Q_k;
      // dL/dz_k = p_k (f_k - sum_j p_j f_j).
      double mean_f = 0.0;
      std::vector<double> f(eval.probs.cols);
      for (std::size_t k = 0; k < f.size(); ++k) {
        f[k] = a * eval.log_probs(r, k) - std::min(v1(r, k), v2(r, k));
        mean_f += eval.probs(r, k) * f[k];
      }
      loss += mean_f;
      for (std::size_t k = 0; k < f.size(); ++k) {
        d_logits(r, k) = eval.probs(r, k) * (f[k] - mean_f) * inv_n;
      }
    }
    c.backward(eval, d_logits, grad);
  }
  loss *= inv_n;
  check_finite(loss, "policy loss");
  nn::adam_step(net.params(), grad, policy_opt_, config_.lr);
  return loss;
}

double SacLearner::update_alpha(const TransitionBatch& batch, Rng& rng) {
  const std::size_t n = batch.size();
  double neg_log_prob = 0.0;
  if (const auto* g = std::get_if<policy::GaussianHead>(&policy_)) {
    const auto noise = standard_normal_matrix(n, static_cast<std::size_t>(space_.size), rng);
    const auto sample = g->rsample(batch.states, noise);
    for (double lp : sample.log_prob) neg_log_prob -= lp;
  } else {
    const auto eval = std::get<policy::CategoricalHead>(policy_).evaluate(batch.states);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t k = 0; k < eval.probs.cols; ++k) {
        neg_log_prob -= eval.probs(r, k) * eval.log_probs(r, k);
      }
    }
  }
  neg_log_prob /= static_cast<double>(n);
  return apply_alpha_gradient(neg_log_prob - target_entropy_);
}

double SacLearner::apply_alpha_gradient(double dj_dalpha) {
  check_finite(dj_dalpha, "temperature gradient");
  // J is linear in alpha, so dJ/dlog(alpha) = alpha * dJ/dalpha.
  std::vector<double> param{log_alpha_};
  const std::vector<double> grad{alpha() * dj_dalpha};
  nn::adam_step(param, grad, alpha_opt_, config_.lr);
  const double lo = std::log(config_.alpha_floor) + 1e-9;
  log_alpha_ = std::clamp(param[0], lo, 0.0);
  return alpha();
}

void SacLearner::soft_update_targets() { soft_update_targets(config_.tau); }

void SacLearner::soft_update_targets(double tau) {
  nn::soft_update(q1_target_, q1_, tau);
  nn::soft_update(q2_target_, q2_, tau);
}

double SacLearner::state_value(std::span<const double> state, Rng& rng, int samples) const {
  const auto s = nn::Matrix::from_row(state);
  const double a = alpha();
  if (const auto* g = std::get_if<policy::GaussianHead>(&policy_)) {
    double v = 0.0;
    for (int k = 0; k < samples; ++k) {
      const auto smp = g->sample(state, rng);
      const auto act = nn::Matrix::from_row(smp.action);
      const double q = std::min(q_values(q1_, s, act)(0, 0), q_values(q2_, s, act)(0, 0));
      v += q - a * smp.log_prob;
    }
    return v / samples;
  }
  const auto eval = std::get<policy::CategoricalHead>(policy_).evaluate(s);
  const auto v1 = q1_.forward(s);
  const auto v2 = q2_.forward(s);
  double v = 0.0;
  for (std::size_t k = 0; k < eval.probs.cols; ++k) {
    v += eval.probs(0, k) * (std::min(v1(0, k), v2(0, k)) - a * eval.log_probs(0, k));
  }
  return v;
}

}  // namespace samo::sac
