#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include "samo/replay_buffer.hpp"
#include "samo/sac.hpp"

namespace samo::testing {

// Two states, two actions, deterministic: action a leads to state a.
// Rewards favour switching from state 0 and staying put is worth nothing.
struct TwoStateMdp {
  static constexpr double kReward[2][2] = {{0.0, 1.0}, {0.5, 0.0}};

  static std::vector<double> state(int s) { return s == 0 ? std::vector<double>{1, 0} : std::vector<double>{0, 1}; }

  // Soft value iteration: Q = r + gamma V(s'), V = alpha log sum exp(Q / alpha).
  static std::array<std::array<double, 2>, 2> soft_q(double alpha, double gamma, int iters = 5000) {
    std::array<std::array<double, 2>, 2> q{};
    for (int it = 0; it < iters; ++it) {
      std::array<double, 2> v{};
      for (int s = 0; s < 2; ++s) {
        const double m = std::max(q[s][0], q[s][1]);
        v[s] = m + alpha * std::log(std::exp((q[s][0] - m) / alpha) + std::exp((q[s][1] - m) / alpha));
      }
      for (int s = 0; s < 2; ++s) {
        for (int a = 0; a < 2; ++a) q[s][a] = kReward[s][a] + gamma * v[a];
      }
    }
    return q;
  }

  // Every (s, a) pair once, repeated `copies` times.
  static std::vector<Transition> all_transitions(int copies = 1) {
    std::vector<Transition> out;
    for (int c = 0; c < copies; ++c) {
      for (int s = 0; s < 2; ++s) {
        for (int a = 0; a < 2; ++a) {
          Transition t;
          t.state = state(s);
          t.action = {static_cast<double>(a)};
          t.next_state = state(a);
          t.reward = kReward[s][a];
          t.next_action = {0.0};
          out.push_back(t);
        }
      }
    }
    return out;
  }
};

struct MdpFit {
  std::array<std::array<double, 2>, 2> learned{};
  std::array<std::array<double, 2>, 2> oracle{};
  double max_error = 0.0;
};

// Fixed-temperature discrete SAC on the full transition table.
inline MdpFit fit_two_state_mdp(int updates, std::uint64_t seed, double alpha = 0.1,
                                double gamma = 0.9) {
  sac::SacConfig cfg;
  cfg.lr = 1e-3;
  cfg.gamma = gamma;
  cfg.tau = 0.05;
  cfg.batch = 32;
  cfg.hidden = {32, 32};
  Rng init(seed);
  sac::SacLearner learner(ActionSpace::discrete(2), 2, cfg, init);
  learner.set_alpha(alpha);
  ReplayBuffer buffer(64);
  for (auto& t : TwoStateMdp::all_transitions(4)) buffer.push(t);
  Rng rng(seed + 1);
  for (int u = 0; u < updates; ++u) {
    const auto batch = buffer.sample(cfg.batch, rng);
    learner.update_critics(batch, rng);
    learner.update_policy(batch, rng);
    learner.soft_update_targets();
  }
  MdpFit fit;
  fit.oracle = TwoStateMdp::soft_q(alpha, gamma);
  nn::Matrix states(2, 2);
  states(0, 0) = 1;
  states(1, 1) = 1;
  const nn::Matrix none(2, 1);
  const auto q1 = learner.q_values(learner.q1(), states, none);
  const auto q2 = learner.q_values(learner.q2(), states, none);
  for (int s = 0; s < 2; ++s) {
    for (int a = 0; a < 2; ++a) {
      fit.learned[s][a] = std::min(q1(s, a), q2(s, a));
      fit.max_error = std::max({fit.max_error, std::abs(q1(s, a) - fit.oracle[s][a]),
                                std::abs(q2(s, a) - fit.oracle[s][a])});
    }
  }
  return fit;
}

}  // namespace samo::testing
