#include "samo/envs/corridor_env.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "samo/errors.hpp"

namespace samo::envs {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;
constexpr double kSpawnHeadingJitter = 3.0 * kDeg;
constexpr double kSpawnLateralJitter = 0.15;

}  // namespace

CorridorEnv::CorridorEnv(CorridorMap map, EnvParams params, bool colors, std::uint64_t seed)
    : map_(std::move(map)),
      params_(params),
      colors_(colors),
      built_(build_corridor(map_)),
      stack_(params.k_frames, params.n_rays * (colors ? 4 : 1)) {
  if (params_.k_frames < 1 || params_.n_rays < 2 || params_.max_steps < 1) {
    throw ConfigError("CorridorEnv: k_frames, n_rays and max_steps must be positive (n_rays >= 2)");
  }
  if (!(params_.speed > 0.0) || !(params_.ray_range > 0.0)) {
    throw ConfigError("CorridorEnv: speed and ray range must be positive");
  }
  this->seed(seed);
}

int CorridorEnv::frame_size() const { return params_.n_rays * (colors_ ? 4 : 1); }

std::vector<double> CorridorEnv::frame() const {
  const int n = params_.n_rays;
  std::vector<double> f(static_cast<std::size_t>(frame_size()), 0.0);
  for (int k = 0; k < n; ++k) {
    const double rel = (-90.0 + 180.0 * k / (n - 1)) * kDeg;
    const double angle = pose_.heading + rel;
    const RayHit hit =
        built_.grid.cast(pose_.x, pose_.y, std::cos(angle), std::sin(angle), params_.ray_range);
    f[static_cast<std::size_t>(k)] = hit.distance / params_.ray_range;
    if (colors_) {
      f[static_cast<std::size_t>(n + 3 * k + static_cast<int>(hit.color))] = 1.0;
    }
  }
  return f;
}

std::vector<double> CorridorEnv::reset_to(const Pose& pose) {
  if (!built_.grid.is_free(built_.grid.cell_of(pose.x, pose.y))) {
    throw ConfigError("CorridorEnv::reset_to: pose is inside a wall");
  }
  pose_ = pose;
  steps_ = 0;
  done_ = false;
  stack_.reset(frame());
  return stack_.observation();
}

std::vector<double> CorridorEnv::reset(std::uint64_t seed) {
  Rng rng(seed);
  const bool from_end = map_.spawn_both_ends && uniform01(rng) < 0.5;
  const double cell = built_.grid.cell_size();
  const CellIndex c = from_end ? built_.path.back() : built_.path.front();
  const int dir = from_end ? (built_.path_dirs.back() + 2) % 4 : built_.path_dirs.front();
  const double heading = dir * std::numbers::pi / 2.0 +
                         (2.0 * uniform01(rng) - 1.0) * kSpawnHeadingJitter;
  const double lateral = (2.0 * uniform01(rng) - 1.0) * kSpawnLateralJitter;
  const double base = dir * std::numbers::pi / 2.0;
  Pose p;
  p.x = (c.x + 0.5) * cell - std::sin(base) * lateral;
  p.y = (c.y + 0.5) * cell + std::cos(base) * lateral;
  p.heading = heading;
  return reset_to(p);
}

StepResult CorridorEnv::step(std::span<const double> action) {
  if (done_) throw UsageError("CorridorEnv::step called on a finished episode");
  if (action.size() != 1 || !std::isfinite(action[0])) {
    throw DomainError("CorridorEnv::step expects one finite steering value");
  }
  const double steer = std::clamp(action[0], -1.0, 1.0);
  ++steps_;
  Pose next = pose_;
  next.heading = std::remainder(pose_.heading + params_.turn_degrees * kDeg * steer,
                                2.0 * std::numbers::pi);
  next.x += params_.speed * std::cos(next.heading);
  next.y += params_.speed * std::sin(next.heading);

  StepResult r;
  if (built_.grid.blocked(pose_.x, pose_.y, next.x, next.y)) {
    pose_.heading = next.heading;
    done_ = true;
    r.reward = -1.0;
    r.done = true;
    r.info = Outcome::kFailure;
  } else {
    pose_ = next;
    if (steps_ >= params_.max_steps) {
      done_ = true;
      r.done = true;
      r.info = Outcome::kCap;
    }
  }
  stack_.push(frame());
  r.observation = stack_.observation();
  return r;
}

}  // namespace samo::envs
