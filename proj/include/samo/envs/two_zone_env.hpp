#pragma once

#include "samo/envs/env.hpp"

namespace samo::envs {

// Ten positions on a loop, advancing one per step. Zone A (0-4) survives
// only action 0, zone B (5-9) only action 1; the wrong action ends the
// episode with -1. Observation: one-hot position.
class TwoZoneEnv : public Env {
 public:
  static constexpr int kPositions = 10;

  TwoZoneEnv(int max_steps, std::uint64_t seed);

  std::string name() const override { return "two_zone"; }
  ActionSpace action_space() const override { return ActionSpace::discrete(2); }
  int observation_dim() const override { return kPositions; }
  int max_steps() const override { return max_steps_; }

  std::vector<double> reset(std::uint64_t seed) override;
  StepResult step(std::span<const double> action) override;

  std::vector<double> reset_to(int position);
  int position() const { return position_; }
  static int safe_action(int position) { return position < 5 ? 0 : 1; }

 private:
  std::vector<double> observation() const;

  int max_steps_;
  int position_ = 0;
};

}  // namespace samo::envs
