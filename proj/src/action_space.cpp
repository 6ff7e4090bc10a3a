#include "samo/action_space.hpp"

#include <algorithm>
#include <string>

#include "samo/errors.hpp"

namespace samo {

void encode_action(const ActionSpace& space, std::span<const double> action, std::span<double> out) {
  if (out.size() != static_cast<std::size_t>(space.encoded_size()) ||
      action.size() != static_cast<std::size_t>(space.stored_size())) {
    throw ConfigError("encode_action: action width does not match the action space");
  }
  if (space.continuous()) {
    std::copy(action.begin(), action.end(), out.begin());
    return;
  }
  const auto index = static_cast<int>(action[0]);
  if (index < 0 || index >= space.size) {
    throw ConfigError("encode_action: discrete action " + std::to_string(index) + " out of range");
  }
  std::fill(out.begin(), out.end(), 0.0);
  out[static_cast<std::size_t>(index)] = 1.0;
}

std::vector<double> encode_action(const ActionSpace& space, std::span<const double> action) {
  std::vector<double> out(static_cast<std::size_t>(space.encoded_size()));
  encode_action(space, action, out);
  return out;
}

std::vector<double> state_action(const ActionSpace& space, std::span<const double> state,
                                 std::span<const double> action) {
  std::vector<double> out(state.size() + static_cast<std::size_t>(space.encoded_size()));
  std::copy(state.begin(), state.end(), out.begin());
  encode_action(space, action, std::span<double>(out).subspan(state.size()));
  return out;
}

}  // namespace samo
