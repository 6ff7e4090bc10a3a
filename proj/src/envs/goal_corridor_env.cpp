#include "samo/envs/goal_corridor_env.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "samo/errors.hpp"

namespace samo::envs {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

GridMap build_grid(const GoalCorridorEnv::Layout& l, double cell) {
  if (l.stem_cells < 1 || l.branch_cells < 1 || l.goal_depth < 1 || l.goal_depth > l.branch_cells) {
    throw ConfigError("GoalCorridorEnv: invalid layout");
  }
  GridMap g(cell, {-l.branch_cells - 1, -1}, {l.branch_cells + 1, l.stem_cells + l.branch_cells + 1});
  for (int y = 0; y <= l.stem_cells; ++y) g.set_free({0, y});
  for (int d = 1; d <= l.branch_cells; ++d) {
    g.set_free({-d, l.stem_cells});
    g.set_free({d, l.stem_cells});
    g.set_free({0, l.stem_cells + d});
  }
  return g;
}

}  // namespace

GoalCorridorEnv::GoalCorridorEnv(EnvParams params, std::uint64_t seed)
    : GoalCorridorEnv(params, Layout{}, seed) {}

GoalCorridorEnv::GoalCorridorEnv(EnvParams params, Layout layout, std::uint64_t seed)
    : params_(params),
      layout_(layout),
      grid_(build_grid(layout, 2.0 * params.half_width)),
      junction_{0, layout.stem_cells},
      stack_(params.k_frames, params.n_rays) {
  if (params_.k_frames < 1 || params_.n_rays < 2 || params_.max_steps < 1) {
    throw ConfigError("GoalCorridorEnv: k_frames, n_rays and max_steps must be positive (n_rays >= 2)");
  }
  this->seed(seed);
}

std::pair<int, int> GoalCorridorEnv::branch_of(CellIndex c) const {
  if (c.y == junction_.y && c.x < 0) return {0, -c.x};
  if (c.y == junction_.y && c.x > 0) return {2, c.x};
  if (c.x == 0 && c.y > junction_.y) return {1, c.y - junction_.y};
  return {-1, 0};
}

std::vector<double> GoalCorridorEnv::frame() const {
  const int n = params_.n_rays;
  std::vector<double> f(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double angle = pose_.heading + (-90.0 + 180.0 * k / (n - 1)) * kDeg;
    f[static_cast<std::size_t>(k)] =
        grid_.cast(pose_.x, pose_.y, std::cos(angle), std::sin(angle), params_.ray_range).distance /
        params_.ray_range;
  }
  return f;
}

std::vector<double> GoalCorridorEnv::observation() const {
  auto obs = stack_.observation();
  for (int k = 0; k < 3; ++k) obs.push_back(k == instruction_ ? 1.0 : 0.0);
  return obs;
}

void GoalCorridorEnv::set_instruction(int instruction) {
  if (instruction < 0 || instruction > 2) throw ConfigError("GoalCorridorEnv: instruction must be 0, 1 or 2");
  instruction_ = instruction;
}

std::vector<double> GoalCorridorEnv::reset_to(const Pose& pose, int instruction) {
  set_instruction(instruction);
  if (!grid_.is_free(grid_.cell_of(pose.x, pose.y))) {
    throw ConfigError("GoalCorridorEnv::reset_to: pose is inside a wall");
  }
  pose_ = pose;
  steps_ = 0;
  done_ = false;
  stack_.reset(frame());
  return observation();
}

std::vector<double> GoalCorridorEnv::reset(std::uint64_t seed) {
  Rng rng(seed);
  const int instruction = std::min(2, static_cast<int>(uniform01(rng) * 3.0));
  const double cell = grid_.cell_size();
  Pose p;
  p.x = 0.5 * cell + (2.0 * uniform01(rng) - 1.0) * 0.15;
  p.y = 0.5 * cell;
  p.heading = std::numbers::pi / 2.0 + (2.0 * uniform01(rng) - 1.0) * 3.0 * kDeg;
  return reset_to(p, instruction);
}

StepResult GoalCorridorEnv::step(std::span<const double> action) {
  if (done_) throw UsageError("GoalCorridorEnv::step called on a finished episode");
  if (action.size() != 1 || !std::isfinite(action[0])) {
    throw DomainError("GoalCorridorEnv::step expects one finite steering value");
  }
  ++steps_;
  Pose next = pose_;
  next.heading = std::remainder(pose_.heading + params_.turn_degrees * kDeg * std::clamp(action[0], -1.0, 1.0),
                                2.0 * std::numbers::pi);
  next.x += params_.speed * std::cos(next.heading);
  next.y += params_.speed * std::sin(next.heading);

  StepResult r;
  if (grid_.blocked(pose_.x, pose_.y, next.x, next.y)) {
    pose_.heading = next.heading;
    r.reward = -1.0;
    r.info = Outcome::kFailure;
  } else {
    pose_ = next;
    const auto [branch, depth] = branch_of(grid_.cell_of(pose_.x, pose_.y));
    if (branch >= 0 && branch != instruction_) {
      r.reward = -0.5;
      r.info = Outcome::kWrongCorridor;
    } else if (branch == instruction_ && depth >= layout_.goal_depth) {
      r.reward = 1.0;
      r.info = Outcome::kGoal;
    } else if (steps_ >= params_.max_steps) {
      r.info = Outcome::kCap;
    }
  }
  r.done = r.info != Outcome::kNone;
  done_ = r.done;
  stack_.push(frame());
  r.observation = observation();
  return r;
}

}  // namespace samo::envs
