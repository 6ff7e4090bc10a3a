#pragma once

#include <cstddef>
#include <deque>
#include <span>
#include <vector>

namespace samo::envs {

// Last K frames, oldest first; missing frames before step K are zeros.
class FrameStack {
 public:
  FrameStack(int k, int frame_size) : k_(k), frame_size_(frame_size) {}

  int frames() const { return k_; }
  int size() const { return k_ * frame_size_; }

  void reset(std::span<const double> first) {
    frames_.assign(static_cast<std::size_t>(k_ - 1), std::vector<double>(frame_size_, 0.0));
    frames_.emplace_back(first.begin(), first.end());
  }
  void push(std::span<const double> frame) {
    frames_.pop_front();
    frames_.emplace_back(frame.begin(), frame.end());
  }
  std::vector<double> observation() const {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(size()));
    for (const auto& f : frames_) out.insert(out.end(), f.begin(), f.end());
    return out;
  }

 private:
  int k_;
  std::size_t frame_size_;
  std::deque<std::vector<double>> frames_;
};

}  // namespace samo::envs
