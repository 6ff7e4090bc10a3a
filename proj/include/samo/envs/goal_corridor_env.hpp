#pragma once

#include "samo/envs/env.hpp"
#include "samo/envs/frame_stack.hpp"
#include "samo/envs/grid_map.hpp"

namespace samo::envs {

// Stem corridor ending in a junction with left, centre and right branches.
// A one-hot instruction (left, centre, right) fixed at reset follows the
// stacked ray frames. Rewards: +1 reaching the instructed branch's goal
// cell, -0.5 entering another branch, -1 on wall contact, 0 otherwise.
class GoalCorridorEnv : public Env {
 public:
  struct Layout {
    int stem_cells = 4;
    int branch_cells = 3;
    int goal_depth = 2;  // branch cell (1-based from the junction) that counts as the goal
  };

  GoalCorridorEnv(EnvParams params, std::uint64_t seed);
  GoalCorridorEnv(EnvParams params, Layout layout, std::uint64_t seed);

  std::string name() const override { return "goal_corridor"; }
  ActionSpace action_space() const override { return ActionSpace::continuous_box(1); }
  int observation_dim() const override { return stack_.size() + 3; }
  int max_steps() const override { return params_.max_steps; }

  std::vector<double> reset(std::uint64_t seed) override;
  StepResult step(std::span<const double> action) override;
  std::optional<Pose> pose() const override { return pose_; }

  // 0 left, 1 centre, 2 right.
  int instruction() const { return instruction_; }
  void set_instruction(int instruction);
  std::vector<double> reset_to(const Pose& pose, int instruction);
  const GridMap& grid() const { return grid_; }
  CellIndex junction() const { return junction_; }

 private:
  // Branch index and depth of a cell, or -1 when the cell is not in a branch.
  std::pair<int, int> branch_of(CellIndex c) const;
  std::vector<double> frame() const;
  std::vector<double> observation() const;

  EnvParams params_;
  Layout layout_;
  GridMap grid_;
  CellIndex junction_;
  FrameStack stack_;
  Pose pose_;
  int instruction_ = 1;
};

}  // namespace samo::envs
