#pragma once

#include <cstddef>
#include <vector>

#include "samo/nn/matrix.hpp"
#include "samo/rng.hpp"

namespace samo {

struct Transition {
  std::vector<double> state;
  std::vector<double> action;
  std::vector<double> next_state;
  double reward = 0.0;
  // 1 when next_state ends the episode in failure, else 0.
  double termination_reward = 0.0;
  // True terminal (failure, goal, wrong corridor); time-cap truncation is not done.
  bool done = false;
  // Action the composite behavior took at next_state; zeros when done.
  std::vector<double> next_action;
};

// Column-stacked view of sampled transitions.
struct TransitionBatch {
  nn::Matrix states;
  nn::Matrix actions;
  nn::Matrix next_states;
  nn::Matrix next_actions;
  std::vector<double> rewards;
  std::vector<double> termination_rewards;
  std::vector<double> dones;

  std::size_t size() const { return rewards.size(); }
};

TransitionBatch make_batch(const std::vector<const Transition*>& items);
TransitionBatch make_batch(const std::vector<Transition>& items);

// Fixed-capacity FIFO ring with uniform sampling (with replacement).
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void push(Transition t);
  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return items_.empty(); }
  void clear();

  // Oldest-first access.
  const Transition& at(std::size_t k) const;
  // Most recently pushed transition.
  Transition& latest();

  TransitionBatch sample(std::size_t n, Rng& rng) const;

 private:
  std::size_t capacity_;
  std::size_t head_ = 0;  // next slot to overwrite once full
  std::vector<Transition> items_;
};

}  // namespace samo
