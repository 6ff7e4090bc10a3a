#pragma once

#include <span>
#include <vector>

namespace samo {

// Continuous actions are `size` reals in [-1, 1]; discrete actions are one
// index in [0, size) stored as a single double.
struct ActionSpace {
  enum class Kind { kContinuous, kDiscrete };

  Kind kind = Kind::kContinuous;
  int size = 1;

  bool continuous() const { return kind == Kind::kContinuous; }
  // Length of a stored action vector.
  int stored_size() const { return continuous() ? size : 1; }
  // Width of the action block fed to Q and termination networks.
  int encoded_size() const { return size; }

  static ActionSpace continuous_box(int dim) { return {Kind::kContinuous, dim}; }
  static ActionSpace discrete(int n) { return {Kind::kDiscrete, n}; }

  friend bool operator==(const ActionSpace&, const ActionSpace&) = default;
};

// Discrete indices become one-hot rows; continuous actions pass through.
void encode_action(const ActionSpace& space, std::span<const double> action, std::span<double> out);
std::vector<double> encode_action(const ActionSpace& space, std::span<const double> action);

// state ++ encoded action
std::vector<double> state_action(const ActionSpace& space, std::span<const double> state,
                                 std::span<const double> action);

}  // namespace samo
