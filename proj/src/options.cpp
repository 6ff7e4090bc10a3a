#include "samo/options.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "samo/errors.hpp"

namespace samo::options {

namespace {

std::vector<int> with_io(int in, const std::vector<int>& hidden, int out) {
  std::vector<int> sizes{in};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(out);
  return sizes;
}

constexpr double kLogFloor = 1e-12;

}  // namespace

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// ------------------------------------------------------------ TerminationFn

TerminationFn::TerminationFn(ActionSpace space, int obs_dim, const std::vector<int>& hidden,
                             int prefix_length, Rng& rng, double threshold)
    : TerminationFn(space,
                    nn::DenseNet(with_io(obs_dim + space.encoded_size(), hidden, 1),
                                 nn::Activation::kTanh, rng),
                    prefix_length, threshold) {}

TerminationFn::TerminationFn(ActionSpace space, nn::DenseNet net, int prefix_length,
                             double threshold)
    : space_(space), net_(std::move(net)), prefix_length_(prefix_length), threshold_(threshold) {
  if (prefix_length < 1) throw ConfigError("TerminationFn: prefix length must be >= 1");
  if (!(threshold > 0.0 && threshold < 1.0)) throw ConfigError("TerminationFn: threshold must be in (0, 1)");
  if (net_.output_size() != 1) throw ConfigError("TerminationFn: network must have one output");
  opt_ = nn::AdamState(net_.param_count());
}

double TerminationFn::probability(std::span<const double> state,
                                  std::span<const double> action) const {
  return sigmoid(net_.forward(state_action(space_, state, action))[0]);
}

int TerminationFn::classify(std::span<const double> state, std::span<const double> action) const {
  return probability(state, action) >= threshold_ ? 1 : 0;
}

std::vector<double> TerminationFn::probabilities(const nn::Matrix& state_actions) const {
  const auto out = net_.forward(state_actions);
  std::vector<double> p(out.rows);
  for (std::size_t r = 0; r < out.rows; ++r) p[r] = sigmoid(out(r, 0));
  return p;
}

nn::Matrix TerminationFn::inputs(const nn::Matrix& states, const nn::Matrix& actions) const {
  const auto width = static_cast<std::size_t>(space_.encoded_size());
  nn::Matrix out(states.rows, states.cols + width);
  for (std::size_t r = 0; r < states.rows; ++r) {
    auto dst = out.row(r);
    auto s = states.row(r);
    std::copy(s.begin(), s.end(), dst.begin());
    encode_action(space_, actions.row(r), dst.subspan(states.cols));
  }
  return out;
}

// ---------------------------------------------------------------- OptionSet

OptionSet::OptionSet(ActionSpace space, int obs_dim, double gamma_beta)
    : space_(space), obs_dim_(obs_dim), gamma_beta_(gamma_beta) {
  if (!(gamma_beta > 0.0 && gamma_beta <= 1.0)) throw ConfigError("OptionSet: gamma_beta must be in (0, 1]");
}

const Option& OptionSet::option(int i) const {
  if (i < 1 || i > size()) throw ConfigError("OptionSet: option index " + std::to_string(i) + " out of range");
  return options_[static_cast<std::size_t>(i - 1)];
}

const TerminationFn& OptionSet::termination(int prefix) const {
  if (prefix < 1 || prefix > size()) throw ConfigError("OptionSet: prefix " + std::to_string(prefix) + " out of range");
  return terminations_[static_cast<std::size_t>(prefix - 1)];
}

TerminationFn& OptionSet::termination(int prefix) {
  if (prefix < 1 || prefix > size()) throw ConfigError("OptionSet: prefix " + std::to_string(prefix) + " out of range");
  return terminations_[static_cast<std::size_t>(prefix - 1)];
}

void OptionSet::append(Option option, TerminationFn fn) {
  if (fn.prefix_length() != size() + 1) {
    throw ConfigError("OptionSet::append: termination function covers the wrong prefix");
  }
  if (!(policy::head_space(option.head) == space_) || !(fn.action_space() == space_)) {
    throw ConfigError("OptionSet::append: action space mismatch");
  }
  options_.push_back(std::move(option));
  terminations_.push_back(std::move(fn));
}

std::vector<double> OptionSet::propose(int option_index, std::span<const double> state, Rng& rng,
                                       bool greedy) const {
  return policy::act(option(option_index).head, state, rng, greedy).action;
}

int OptionSet::classify(int prefix, std::span<const double> state,
                        std::span<const double> action) const {
  return termination(prefix).classify(state, action);
}

// ---------------------------------------------------------------- eligible

bool eligible(const OptionSource& set, int i, std::span<const double> state,
              std::span<const double> action_i) {
  const int k = set.option_count();
  if (i < 1 || i > k) throw ConfigError("eligible: option index " + std::to_string(i) + " out of range");
  const int prev = i == 1 ? 1 : set.classify(i - 1, state, action_i);
  const int own = set.classify(i, state, action_i);
  if (prev == 1 && own == 0) return true;
  if (i != k) return false;
  for (int j = 1; j <= k; ++j) {
    if (set.classify(j, state, action_i) == 0) return false;
  }
  return true;
}

// ---------------------------------------------------------------- training

std::vector<double> td_targets(const TerminationFn& fn, const TransitionBatch& batch,
                               double gamma_beta) {
  const auto next = fn.probabilities(fn.inputs(batch.next_states, batch.next_actions));
  std::vector<double> y(batch.size());
  for (std::size_t r = 0; r < y.size(); ++r) {
    const double target = batch.dones[r] != 0.0
                              ? batch.termination_rewards[r]
                              : batch.termination_rewards[r] + gamma_beta * next[r];
    y[r] = std::clamp(target, 0.0, 1.0);
  }
  return y;
}

double td_update_beta(TerminationFn& fn, const TransitionBatch& batch, double gamma_beta,
                      double lr) {
  const std::size_t n = batch.size();
  if (n == 0) throw ConfigError("td_update_beta: empty batch");
  const auto y = td_targets(fn, batch, gamma_beta);
  nn::ForwardCache cache;
  const auto out = fn.net().forward(fn.inputs(batch.states, batch.actions), &cache);
  nn::Matrix upstream(n, 1);
  double loss = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    const double p = sigmoid(out(r, 0));
    const double residual = p - y[r];
    loss += residual * residual;
    upstream(r, 0) = 2.0 * residual * p * (1.0 - p) / static_cast<double>(n);
  }
  loss /= static_cast<double>(n);
  if (!std::isfinite(loss)) throw NumericError("td_update_beta: non-finite loss");
  std::vector<double> grad(fn.net().param_count(), 0.0);
  fn.net().backward(cache, upstream, grad, false);
  nn::adam_step(fn.net().params(), grad, fn.optimizer(), lr);
  return loss;
}

std::vector<double> geometric_labels(int length, double gamma_beta, bool failed) {
  if (length < 1) throw ConfigError("geometric_labels: trajectory length must be >= 1");
  std::vector<double> y(static_cast<std::size_t>(length), 0.0);
  if (!failed) return y;
  double v = 1.0;
  for (int t = length - 1; t >= 0; --t) {
    y[static_cast<std::size_t>(t)] = v;
    v *= gamma_beta;
  }
  return y;
}

void LabelPool::push(LabeledSample s) {
  if (items_.size() >= capacity_) items_.erase(items_.begin());
  items_.push_back(std::move(s));
}

double bce_loss(const TerminationFn& fn, const std::vector<LabeledSample>& samples) {
  if (samples.empty()) return 0.0;
  nn::Matrix in(samples.size(), samples.front().input.size());
  for (std::size_t r = 0; r < samples.size(); ++r) {
    std::copy(samples[r].input.begin(), samples[r].input.end(), in.row(r).begin());
  }
  const auto p = fn.probabilities(in);
  double loss = 0.0;
  for (std::size_t r = 0; r < samples.size(); ++r) {
    const double y = samples[r].label;
    loss -= y * std::log(std::max(p[r], kLogFloor)) + (1.0 - y) * std::log(std::max(1.0 - p[r], kLogFloor));
  }
  return loss / static_cast<double>(samples.size());
}

BceResult bce_train_beta(TerminationFn& fn, const LabelPool& pool, int epochs, int batch_size,
                         double lr, Rng& rng) {
  if (epochs < 0 || batch_size < 2) throw ConfigError("bce_train_beta: bad epochs or batch size");
  std::vector<const LabeledSample*> positive, negative;
  for (const auto& s : pool.items()) (s.label >= 0.5 ? positive : negative).push_back(&s);
  BceResult result;
  if (pool.items().empty()) {
    result.skipped = true;
    result.warning = "BCE training skipped: the label pool is empty";
    return result;
  }
  // With one class missing the batches cannot be balanced; train on the
  // class that exists and say so.
  const bool one_sided = positive.empty() || negative.empty();
  if (one_sided) {
    result.warning = "BCE batches unbalanced: no " +
                     std::string(positive.empty() ? "termination" : "non-termination") +
                     " samples in the label pool";
    if (positive.empty()) positive = negative;
    if (negative.empty()) negative = positive;
  }

  const std::size_t half = static_cast<std::size_t>(batch_size) / 2;
  const std::size_t rows = 2 * half;
  const std::size_t width = pool.items().front().input.size();
  const int steps_per_epoch = std::max<int>(1, static_cast<int>(pool.size() / rows));
  std::uniform_int_distribution<std::size_t> pick_pos(0, positive.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_neg(0, negative.size() - 1);
  std::vector<double> grad(fn.net().param_count());

  for (int step = 0; step < epochs * steps_per_epoch; ++step) {
    nn::Matrix in(rows, width);
    std::vector<double> y(rows);
    for (std::size_t r = 0; r < rows; ++r) {
      const LabeledSample* s = r < half ? positive[pick_pos(rng)] : negative[pick_neg(rng)];
      std::copy(s->input.begin(), s->input.end(), in.row(r).begin());
      y[r] = s->label;
    }
    nn::ForwardCache cache;
    const auto out = fn.net().forward(in, &cache);
    nn::Matrix upstream(rows, 1);
    for (std::size_t r = 0; r < rows; ++r) {
      upstream(r, 0) = (sigmoid(out(r, 0)) - y[r]) / static_cast<double>(rows);
    }
    std::fill(grad.begin(), grad.end(), 0.0);
    fn.net().backward(cache, upstream, grad, false);
    nn::adam_step(fn.net().params(), grad, fn.optimizer(), lr);
    ++result.steps;
  }
  result.final_loss = bce_loss(fn, pool.items());
  if (!std::isfinite(result.final_loss)) throw NumericError("bce_train_beta: non-finite loss");
  return result;
}

TerminationFn warm_start_prefix(const OptionSet& set, const std::vector<int>& hidden, Rng& rng) {
  const int k = set.size() + 1;
  if (set.empty()) {
    return TerminationFn(set.action_space(), set.obs_dim(), hidden, k, rng);
  }
  const auto& last = set.termination(set.size());
  return TerminationFn(set.action_space(), last.net(), k, last.threshold());
}

double nesting_violation_rate(const OptionSet& set,
                              const std::vector<std::vector<double>>& states) {
  if (set.size() < 2 || states.empty()) return 0.0;
  Rng unused(0);
  std::size_t violations = 0;
  std::size_t total = 0;
  for (const auto& s : states) {
    for (int i = 2; i <= set.size(); ++i) {
      const auto a = set.propose(i - 1, s, unused, true);
      if (set.classify(i - 1, s, a) == 0 && set.classify(i, s, a) == 1) ++violations;
      ++total;
    }
  }
  return static_cast<double>(violations) / static_cast<double>(total);
}

}  // namespace samo::options
