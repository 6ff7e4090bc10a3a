#pragma once

#include <functional>
#include <map>
#include <utility>

#include "samo/envs/env.hpp"
#include "samo/options.hpp"

namespace samo::testing {

// Option source with hand-set proposals and verdicts.
class MockSource : public options::OptionSource {
 public:
  explicit MockSource(int k) : k_(k) {}

  // Option i always proposes the scalar action `i`.
  int option_count() const override { return k_; }
  std::vector<double> propose(int option, std::span<const double>, Rng&, bool) const override {
    ++proposals;
    return {static_cast<double>(option)};
  }
  int classify(int prefix, std::span<const double> state,
               std::span<const double> action) const override {
    const int a = static_cast<int>(action[0]);
    if (rule) return rule(prefix, state, a);
    const auto it = verdicts.find({prefix, a});
    return it == verdicts.end() ? 1 : it->second;
  }

  // (prefix, proposing option) -> verdict; missing entries mean termination.
  std::map<std::pair<int, int>, int> verdicts;
  std::function<int(int, std::span<const double>, int)> rule;
  mutable int proposals = 0;

 private:
  int k_;
};

// Deterministic env: the observation is a one-hot of a scripted state id;
// `fail_at` ids end the episode with -1, otherwise the id advances by one.
class ScriptedEnv : public envs::Env {
 public:
  ScriptedEnv(int states, int max_steps, std::vector<int> fail_at = {})
      : states_(states), max_steps_(max_steps), fail_at_(std::move(fail_at)) {}

  std::string name() const override { return "scripted"; }
  ActionSpace action_space() const override { return ActionSpace::continuous_box(1); }
  int observation_dim() const override { return states_; }
  int max_steps() const override { return max_steps_; }

  std::vector<double> reset(std::uint64_t) override {
    id_ = 0;
    steps_ = 0;
    done_ = false;
    return obs();
  }
  envs::StepResult step(std::span<const double>) override {
    if (done_) throw std::logic_error("step after done");
    ++steps_;
    id_ = (id_ + 1) % states_;
    envs::StepResult r;
    r.observation = obs();
    for (int f : fail_at_) {
      if (f == id_) {
        r.reward = -1.0;
        r.done = true;
        r.info = envs::Outcome::kFailure;
      }
    }
    if (!r.done && steps_ >= max_steps_) {
      r.done = true;
      r.info = envs::Outcome::kCap;
    }
    done_ = r.done;
    return r;
  }
  int id() const { return id_; }

 private:
  std::vector<double> obs() const {
    std::vector<double> o(states_, 0.0);
    o[id_] = 1.0;
    return o;
  }
  int states_;
  int max_steps_;
  std::vector<int> fail_at_;
  int id_ = 0;
};

// Sets a termination net so that it classifies by the one-hot state alone:
// termination exactly on the listed state ids.
inline void script_termination(options::TerminationFn& fn, int states,
                               const std::vector<int>& terminating) {
  auto& net = fn.net();
  for (auto& p : net.params()) p = 0.0;
  if (net.layer_count() != 1) throw std::logic_error("script_termination expects a linear net");
  auto p = net.params();
  p[net.bias_offset(0)] = -10.0;
  for (int s : terminating) {
    if (s < states) p[net.weight_offset(0) + static_cast<std::size_t>(s)] = 20.0;
  }
}

}  // namespace samo::testing
