#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "samo/action_space.hpp"
#include "samo/nn/adam.hpp"
#include "samo/nn/dense_net.hpp"
#include "samo/policy.hpp"
#include "samo/replay_buffer.hpp"

namespace samo::options {

inline constexpr double kDefaultThreshold = 0.5;
inline constexpr std::size_t kLabelPoolCapacity = 1000;

double sigmoid(double z);

// Failure-proximity predictor beta_{1..i}(s, a) for the first `prefix_length`
// options, trained jointly for the whole prefix. Output 1 means termination:
// the prefix cannot safely handle (s, a).
class TerminationFn {
 public:
  TerminationFn(ActionSpace space, int obs_dim, const std::vector<int>& hidden, int prefix_length,
                Rng& rng, double threshold = kDefaultThreshold);
  TerminationFn(ActionSpace space, nn::DenseNet net, int prefix_length,
                double threshold = kDefaultThreshold);

  int prefix_length() const { return prefix_length_; }
  double threshold() const { return threshold_; }
  const ActionSpace& action_space() const { return space_; }
  const nn::DenseNet& net() const { return net_; }
  nn::DenseNet& net() { return net_; }
  nn::AdamState& optimizer() { return opt_; }

  double probability(std::span<const double> state, std::span<const double> action) const;
  // 1 iff probability >= threshold (ties count as termination).
  int classify(std::span<const double> state, std::span<const double> action) const;
  // Sigmoid outputs for rows of state ++ encoded action.
  std::vector<double> probabilities(const nn::Matrix& state_actions) const;

  nn::Matrix inputs(const nn::Matrix& states, const nn::Matrix& actions) const;

 private:
  ActionSpace space_;
  nn::DenseNet net_;
  int prefix_length_;
  double threshold_;
  nn::AdamState opt_;
};

struct Option {
  policy::PolicyHead head;
  double alpha = 1.0;  // temperature at freeze time
  bool mature = true;  // false when the step budget ran out first
};

// Anything the execution cascade can query: per-option proposals and
// per-prefix hard classifications. Indices are 1-based.
class OptionSource {
 public:
  virtual ~OptionSource() = default;
  virtual int option_count() const = 0;
  virtual std::vector<double> propose(int option, std::span<const double> state, Rng& rng,
                                      bool greedy) const = 0;
  virtual int classify(int prefix, std::span<const double> state,
                       std::span<const double> action) const = 0;
};

// Ordered frozen options and one nested termination function per prefix.
class OptionSet : public OptionSource {
 public:
  OptionSet(ActionSpace space, int obs_dim, double gamma_beta);

  const ActionSpace& action_space() const { return space_; }
  int obs_dim() const { return obs_dim_; }
  double gamma_beta() const { return gamma_beta_; }
  int size() const { return static_cast<int>(options_.size()); }
  bool empty() const { return options_.empty(); }

  const Option& option(int i) const;
  const TerminationFn& termination(int prefix) const;
  TerminationFn& termination(int prefix);

  // Requires fn.prefix_length() == size() + 1.
  void append(Option option, TerminationFn fn);

  int option_count() const override { return size(); }
  std::vector<double> propose(int option, std::span<const double> state, Rng& rng,
                              bool greedy) const override;
  int classify(int prefix, std::span<const double> state,
               std::span<const double> action) const override;

 private:
  ActionSpace space_;
  int obs_dim_;
  double gamma_beta_;
  std::vector<Option> options_;
  std::vector<TerminationFn> terminations_;
};

// Option i may act on (s, a_i) iff the prefix without it classifies
// termination and the prefix with it classifies non-termination. The empty
// prefix always classifies termination; the last option is also eligible
// when every prefix classifies termination.
bool eligible(const OptionSource& set, int i, std::span<const double> state,
              std::span<const double> action_i);

// One squared-error step of beta(s, a) toward r_beta + gamma_beta beta(s', a')
// (no bootstrap on terminal transitions), target clamped to [0, 1].
// Returns the loss before the step.
double td_update_beta(TerminationFn& fn, const TransitionBatch& batch, double gamma_beta, double lr);
std::vector<double> td_targets(const TerminationFn& fn, const TransitionBatch& batch,
                               double gamma_beta);

// y_t = gamma_beta^(T-1-t) for failed episodes, all zeros otherwise.
std::vector<double> geometric_labels(int length, double gamma_beta, bool failed);

struct LabeledSample {
  std::vector<double> input;  // state ++ encoded action
  double label = 0.0;
};

// FIFO pool of labeled (s, a, y) records for BCE training.
class LabelPool {
 public:
  explicit LabelPool(std::size_t capacity = kLabelPoolCapacity) : capacity_(capacity) {}
  void push(LabeledSample s);
  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool full() const { return items_.size() >= capacity_; }
  const std::vector<LabeledSample>& items() const { return items_; }

 private:
  std::size_t capacity_;
  std::vector<LabeledSample> items_;
};

struct BceResult {
  double final_loss = 0.0;
  int steps = 0;
  bool skipped = false;
  std::string warning;
};

// Binary cross-entropy training; every minibatch draws half its rows from
// labels >= 0.5 and half from labels < 0.5, with replacement. A pool holding
// only one class trains on that class alone and reports a warning; an empty
// pool is skipped.
BceResult bce_train_beta(TerminationFn& fn, const LabelPool& pool, int epochs, int batch_size,
                         double lr, Rng& rng);

// Mean BCE of fn over the pool.
double bce_loss(const TerminationFn& fn, const std::vector<LabeledSample>& samples);

// Fresh prefix function for option k = set.size() + 1: a copy of the last
// prefix function when one exists, otherwise a random network.
TerminationFn warm_start_prefix(const OptionSet& set, const std::vector<int>& hidden, Rng& rng);

// Fraction of (state, i >= 2) pairs where prefix i-1 says non-termination but
// prefix i says termination for option i-1's greedy action.
double nesting_violation_rate(const OptionSet& set, const std::vector<std::vector<double>>& states);

}  // namespace samo::options
