#include "samo/envs/two_zone_env.hpp"

#include <cmath>

#include "samo/errors.hpp"

namespace samo::envs {

TwoZoneEnv::TwoZoneEnv(int max_steps, std::uint64_t seed) : max_steps_(max_steps) {
  if (max_steps < 1) throw ConfigError("TwoZoneEnv: max_steps must be positive");
  this->seed(seed);
}

std::vector<double> TwoZoneEnv::observation() const {
  std::vector<double> obs(kPositions, 0.0);
  obs[static_cast<std::size_t>(position_)] = 1.0;
  return obs;
}

std::vector<double> TwoZoneEnv::reset_to(int position) {
  if (position < 0 || position >= kPositions) throw ConfigError("TwoZoneEnv: position out of range");
  position_ = position;
  steps_ = 0;
  done_ = false;
  return observation();
}

std::vector<double> TwoZoneEnv::reset(std::uint64_t seed) {
  Rng rng(seed);
  return reset_to(static_cast<int>(std::uniform_int_distribution<int>(0, kPositions - 1)(rng)));
}

StepResult TwoZoneEnv::step(std::span<const double> action) {
  if (done_) throw UsageError("TwoZoneEnv::step called on a finished episode");
  if (action.size() != 1 || (action[0] != 0.0 && action[0] != 1.0)) {
    throw DomainError("TwoZoneEnv::step expects action 0 or 1");
  }
  ++steps_;
  StepResult r;
  if (static_cast<int>(action[0]) != safe_action(position_)) {
    r.reward = -1.0;
    r.info = Outcome::kFailure;
  } else {
    position_ = (position_ + 1) % kPositions;
    if (steps_ >= max_steps_) r.info = Outcome::kCap;
  }
  r.done = r.info != Outcome::kNone;
  done_ = r.done;
  r.observation = observation();
  return r;
}

}  // namespace samo::envs
