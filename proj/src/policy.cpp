#include "samo/policy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "samo/errors.hpp"

namespace samo::policy {

namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178;

std::vector<int> with_io(int in, const std::vector<int>& hidden, int out) {
  std::vector<int> sizes{in};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(out);
  return sizes;
}

double clamp_log_std(double v) { return std::clamp(v, kLogStdMin, kLogStdMax); }

// d/du of -log(1 - tanh(u)^2 + eps), written in terms of a = tanh(u).
double squash_correction_grad(double a) {
  const double one_minus = 1.0 - a * a;
  return 2.0 * a * one_minus / (one_minus + kTanhEps);
}

}  // namespace

// ---------------------------------------------------------------- Gaussian

GaussianHead::GaussianHead(int obs_dim, int action_dim, const std::vector<int>& hidden, Rng& rng)
    : net_(with_io(obs_dim, hidden, 2 * action_dim), nn::Activation::kTanh, rng) {}

GaussianHead::GaussianHead(nn::DenseNet net) : net_(std::move(net)) {
  if (net_.output_size() % 2 != 0) throw ConfigError("GaussianHead: output size must be even");
}

ActionSample GaussianHead::sample(std::span<const double> state,
                                  std::span<const double> noise) const {
  const int dim = action_dim();
  if (noise.size() != static_cast<std::size_t>(dim)) {
    throw ConfigError("GaussianHead::sample: noise width must equal the action dimension");
  }
  const auto out = net_.forward(state);
  ActionSample s;
  s.action.resize(static_cast<std::size_t>(dim));
  for (int d = 0; d < dim; ++d) {
    const double mean = out[static_cast<std::size_t>(d)];
    const double log_std = clamp_log_std(out[static_cast<std::size_t>(dim + d)]);
    const double eps = noise[static_cast<std::size_t>(d)];
    const double a = std::tanh(mean + std::exp(log_std) * eps);
    s.action[static_cast<std::size_t>(d)] = a;
    s.log_prob += -0.5 * eps * eps - log_std - kHalfLog2Pi - std::log(1.0 - a * a + kTanhEps);
  }
  return s;
}

ActionSample GaussianHead::sample(std::span<const double> state, Rng& rng) const {
  std::vector<double> noise(static_cast<std::size_t>(action_dim()));
  for (double& e : noise) e = standard_normal(rng);
  return sample(state, noise);
}

double GaussianHead::log_prob(std::span<const double> state, std::span<const double> action) const {
  const int dim = action_dim();
  if (action.size() != static_cast<std::size_t>(dim)) {
    throw ConfigError("GaussianHead::log_prob: action width mismatch");
  }
  for (double a : action) {
    if (!(std::abs(a) < 1.0)) throw DomainError("GaussianHead::log_prob: |action| must be < 1");
  }
  const auto out = net_.forward(state);
  double lp = 0.0;
  for (int d = 0; d < dim; ++d) {
    const double a = action[static_cast<std::size_t>(d)];
    const double mean = out[static_cast<std::size_t>(d)];
    const double log_std = clamp_log_std(out[static_cast<std::size_t>(dim + d)]);
    const double eps = (std::atanh(a) - mean) / std::exp(log_std);
    lp += -0.5 * eps * eps - log_std - kHalfLog2Pi - std::log(1.0 - a * a + kTanhEps);
  }
  return lp;
}

std::vector<double> GaussianHead::greedy(std::span<const double> state) const {
  const auto out = net_.forward(state);
  std::vector<double> a(static_cast<std::size_t>(action_dim()));
  for (std::size_t d = 0; d < a.size(); ++d) a[d] = std::tanh(out[d]);
  return a;
}

double GaussianHead::entropy_estimate(std::span<const double> state, int n_samples,
                                      Rng& rng) const {
  if (n_samples < 1) throw ConfigError("entropy_estimate: n_samples must be >= 1");
  double sum = 0.0;
  for (int k = 0; k < n_samples; ++k) sum -= sample(state, rng).log_prob;
  return sum / n_samples;
}

GaussianHead::Batch GaussianHead::rsample(const nn::Matrix& states, const nn::Matrix& noise) const {
  const auto dim = static_cast<std::size_t>(action_dim());
  if (noise.rows != states.rows || noise.cols != dim) {
    throw ConfigError("GaussianHead::rsample: noise shape mismatch");
  }
  Batch b;
  b.noise = noise;
  const nn::Matrix out = net_.forward(states, &b.cache);
  b.std = nn::Matrix(states.rows, dim);
  b.action = nn::Matrix(states.rows, dim);
  b.log_prob.assign(states.rows, 0.0);
  b.clamped.assign(states.rows * dim, 0);
  for (std::size_t r = 0; r < states.rows; ++r) {
    for (std::size_t d = 0; d < dim; ++d) {
      const double raw = out(r, dim + d);
      const double log_std = clamp_log_std(raw);
      b.clamped[r * dim + d] = raw != log_std;
      const double sd = std::exp(log_std);
      const double eps = noise(r, d);
      const double a = std::tanh(out(r, d) + sd * eps);
      b.std(r, d) = sd;
      b.action(r, d) = a;
      b.log_prob[r] += -0.5 * eps * eps - log_std - kHalfLog2Pi - std::log(1.0 - a * a + kTanhEps);
    }
  }
  return b;
}

void GaussianHead::backward(const Batch& batch, const nn::Matrix& d_action,
                            std::span<const double> d_log_prob,
                            std::span<double> param_grad) const {
  const std::size_t rows = batch.action.rows;
  const std::size_t dim = batch.action.cols;
  if (d_action.rows != rows || d_action.cols != dim || d_log_prob.size() != rows) {
    throw ConfigError("GaussianHead::backward: gradient shape mismatch");
  }
  nn::Matrix upstream(rows, 2 * dim);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t d = 0; d < dim; ++d) {
      const double a = batch.action(r, d);
      const double d_pre = d_action(r, d) * (1.0 - a * a) + d_log_prob[r] * squash_correction_grad(a);
      upstream(r, d) = d_pre;
      upstream(r, dim + d) =
          batch.clamped[r * dim + d] ? 0.0 : d_pre * batch.std(r, d) * batch.noise(r, d) - d_log_prob[r];
    }
  }
  net_.backward(batch.cache, upstream, param_grad, false);
}

// ------------------------------------------------------------- Categorical

void log_softmax(std::span<const double> logits, std::span<double> out) {
  const double mx = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double z : logits) sum += std::exp(z - mx);
  const double lse = mx + std::log(sum);
  for (std::size_t k = 0; k < logits.size(); ++k) out[k] = logits[k] - lse;
}

CategoricalHead::CategoricalHead(int obs_dim, int n_actions, const std::vector<int>& hidden,
                                 Rng& rng)
    : net_(with_io(obs_dim, hidden, n_actions), nn::Activation::kTanh, rng) {}

CategoricalHead::CategoricalHead(nn::DenseNet net) : net_(std::move(net)) {}

std::vector<double> CategoricalHead::probabilities(std::span<const double> state) const {
  const auto logits = net_.forward(state);
  std::vector<double> p(logits.size());
  log_softmax(logits, p);
  for (double& v : p) v = std::exp(v);
  return p;
}

ActionSample CategoricalHead::sample(std::span<const double> state, double uniform_draw) const {
  const auto logits = net_.forward(state);
  std::vector<double> lp(logits.size());
  log_softmax(logits, lp);
  std::size_t index = lp.size() - 1;
  double cum = 0.0;
  for (std::size_t k = 0; k < lp.size(); ++k) {
    cum += std::exp(lp[k]);
    if (uniform_draw < cum) {
      index = k;
      break;
    }
  }
  return {{static_cast<double>(index)}, lp[index]};
}

ActionSample CategoricalHead::sample(std::span<const double> state, Rng& rng) const {
  return sample(state, uniform01(rng));
}

double CategoricalHead::log_prob(std::span<const double> state, int action) const {
  if (action < 0 || action >= n_actions()) throw ConfigError("CategoricalHead: action out of range");
  const auto logits = net_.forward(state);
  std::vector<double> lp(logits.size());
  log_softmax(logits, lp);
  return lp[static_cast<std::size_t>(action)];
}

std::vector<double> CategoricalHead::greedy(std::span<const double> state) const {
  const auto logits = net_.forward(state);
  const auto best = std::max_element(logits.begin(), logits.end()) - logits.begin();
  return {static_cast<double>(best)};
}

double CategoricalHead::entropy(std::span<const double> state) const {
  const auto logits = net_.forward(state);
  std::vector<double> lp(logits.size());
  log_softmax(logits, lp);
  double h = 0.0;
  for (double l : lp) h -= std::exp(l) * l;
  return h;
}

CategoricalHead::Batch CategoricalHead::evaluate(const nn::Matrix& states) const {
  Batch b;
  const nn::Matrix logits = net_.forward(states, &b.cache);
  b.log_probs = nn::Matrix(logits.rows, logits.cols);
  b.probs = nn::Matrix(logits.rows, logits.cols);
  for (std::size_t r = 0; r < logits.rows; ++r) {
    log_softmax(logits.row(r), b.log_probs.row(r));
    for (std::size_t k = 0; k < logits.cols; ++k) b.probs(r, k) = std::exp(b.log_probs(r, k));
  }
  return b;
}

void CategoricalHead::backward(const Batch& batch, const nn::Matrix& d_logits,
                               std::span<double> param_grad) const {
  net_.backward(batch.cache, d_logits, param_grad, false);
}

// ------------------------------------------------------------------ helpers

PolicyHead make_head(const ActionSpace& space, int obs_dim, const std::vector<int>& hidden,
                     Rng& rng) {
  if (space.continuous()) return GaussianHead(obs_dim, space.size, hidden, rng);
  return CategoricalHead(obs_dim, space.size, hidden, rng);
}

const nn::DenseNet& head_net(const PolicyHead& head) {
  return std::visit([](const auto& h) -> const nn::DenseNet& { return h.net(); }, head);
}

nn::DenseNet& head_net(PolicyHead& head) {
  return std::visit([](auto& h) -> nn::DenseNet& { return h.net(); }, head);
}

ActionSpace head_space(const PolicyHead& head) {
  if (const auto* g = std::get_if<GaussianHead>(&head)) return ActionSpace::continuous_box(g->action_dim());
  return ActionSpace::discrete(std::get<CategoricalHead>(head).n_actions());
}

ActionSample act(const PolicyHead& head, std::span<const double> state, Rng& rng, bool greedy) {
  if (const auto* g = std::get_if<GaussianHead>(&head)) {
    if (!greedy) return g->sample(state, rng);
    std::vector<double> zero(static_cast<std::size_t>(g->action_dim()), 0.0);
    return g->sample(state, zero);
  }
  const auto& c = std::get<CategoricalHead>(head);
  if (!greedy) return c.sample(state, rng);
  auto a = c.greedy(state);
  return {a, c.log_prob(state, static_cast<int>(a[0]))};
}

double entropy_estimate(const PolicyHead& head, std::span<const double> state, int n_samples,
                        Rng& rng) {
  if (n_samples < 1) throw ConfigError("entropy_estimate: n_samples must be >= 1");
  if (const auto* g = std::get_if<GaussianHead>(&head)) {
    return g->entropy_estimate(state, n_samples, rng);
  }
  return std::get<CategoricalHead>(head).entropy(state);
}

}  // namespace samo::policy
