#pragma once

#include "samo/envs/corridor_map.hpp"
#include "samo/envs/env.hpp"
#include "samo/envs/frame_stack.hpp"

namespace samo::envs {

// Point agent with constant speed steering through a rasterized corridor.
// Each frame holds n_rays normalized distances over [-90, +90] degrees, and
// with colors enabled a (none, green, red) one-hot per ray after them.
// Reward -1 and done on wall contact; otherwise 0 until the step cap.
class CorridorEnv : public Env {
 public:
  CorridorEnv(CorridorMap map, EnvParams params, bool colors, std::uint64_t seed);

  std::string name() const override { return colors_ ? "color_corridor" : "corridor"; }
  ActionSpace action_space() const override { return ActionSpace::continuous_box(1); }
  int observation_dim() const override { return stack_.size(); }
  int max_steps() const override { return params_.max_steps; }

  std::vector<double> reset(std::uint64_t seed) override;
  StepResult step(std::span<const double> action) override;
  std::optional<Pose> pose() const override { return pose_; }

  // Puts the agent at an exact pose; the frame stack restarts from it.
  std::vector<double> reset_to(const Pose& pose);

  const BuiltCorridor& corridor() const { return built_; }
  const EnvParams& params() const { return params_; }
  int frame_size() const;
  std::vector<double> frame() const;

 private:
  CorridorMap map_;
  EnvParams params_;
  bool colors_;
  BuiltCorridor built_;
  FrameStack stack_;
  Pose pose_;
};

}  // namespace samo::envs
