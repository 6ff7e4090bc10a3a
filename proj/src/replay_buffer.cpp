#include "samo/replay_buffer.hpp"

#include <algorithm>

#include "samo/errors.hpp"

namespace samo {

namespace {

void copy_row(nn::Matrix& m, std::size_t r, const std::vector<double>& v) {
  if (v.size() != m.cols) throw ConfigError("make_batch: inconsistent vector lengths");
  std::copy(v.begin(), v.end(), m.row(r).begin());
}

}  // namespace

TransitionBatch make_batch(const std::vector<const Transition*>& items) {
  if (items.empty()) throw ConfigError("make_batch: empty batch");
  const Transition& first = *items.front();
  const std::size_t n = items.size();
  TransitionBatch b;
  b.states = nn::Matrix(n, first.state.size());
  b.actions = nn::Matrix(n, first.action.size());
  b.next_states = nn::Matrix(n, first.next_state.size());
  b.next_actions = nn::Matrix(n, first.next_action.size());
  b.rewards.resize(n);
  b.termination_rewards.resize(n);
  b.dones.resize(n);
  for (std::size_t r = 0; r < n; ++r) {
    const Transition& t = *items[r];
    copy_row(b.states, r, t.state);
    copy_row(b.actions, r, t.action);
    copy_row(b.next_states, r, t.next_state);
    copy_row(b.next_actions, r, t.next_action);
    b.rewards[r] = t.reward;
    b.termination_rewards[r] = t.termination_reward;
    b.dones[r] = t.done ? 1.0 : 0.0;
  }
  return b;
}

TransitionBatch make_batch(const std::vector<Transition>& items) {
  std::vector<const Transition*> ptrs;
  ptrs.reserve(items.size());
  for (const auto& t : items) ptrs.push_back(&t);
  return make_batch(ptrs);
}

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw ConfigError("ReplayBuffer: capacity must be positive");
  items_.reserve(std::min<std::size_t>(capacity, 1u << 16));
}

void ReplayBuffer::push(Transition t) {
  if (items_.size() < capacity_) {
    items_.push_back(std::move(t));
    return;
  }
  items_[head_] = std::move(t);
  head_ = (head_ + 1) % capacity_;
}

void ReplayBuffer::clear() {
  items_.clear();
  head_ = 0;
}

const Transition& ReplayBuffer::at(std::size_t k) const {
  if (k >= items_.size()) throw ConfigError("ReplayBuffer::at: index out of range");
  return items_[(head_ + k) % items_.size()];
}

Transition& ReplayBuffer::latest() {
  if (items_.empty()) throw UsageError("ReplayBuffer::latest: buffer is empty");
  const std::size_t n = items_.size();
  return items_[(head_ + n - 1) % n];
}

TransitionBatch ReplayBuffer::sample(std::size_t n, Rng& rng) const {
  if (items_.empty()) throw UsageError("ReplayBuffer::sample: buffer is empty");
  std::uniform_int_distribution<std::size_t> pick(0, items_.size() - 1);
  std::vector<const Transition*> chosen(n);
  for (auto& p : chosen) p = &items_[pick(rng)];
  return make_batch(chosen);
}

}  // namespace samo
