#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "samo/action_space.hpp"
#include "samo/rng.hpp"

namespace samo::envs {

enum class Outcome { kNone, kFailure, kGoal, kCap, kWrongCorridor };

std::string to_string(Outcome o);

// Outcomes that count as failure for termination learning.
inline bool is_failure(Outcome o) { return o == Outcome::kFailure || o == Outcome::kWrongCorridor; }

struct StepResult {
  std::vector<double> observation;
  double reward = 0.0;
  bool done = false;
  Outcome info = Outcome::kNone;
};

struct Pose {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;  // radians, counter-clockwise from +x
};

// Common episode contract. After done, step() throws UsageError until reset().
class Env {
 public:
  virtual ~Env() = default;

  virtual std::string name() const = 0;
  virtual ActionSpace action_space() const = 0;
  virtual int observation_dim() const = 0;
  virtual int max_steps() const = 0;

  virtual std::vector<double> reset(std::uint64_t seed) = 0;
  virtual StepResult step(std::span<const double> action) = 0;

  // Draws the episode seed from the stream given at construction.
  std::vector<double> reset() { return reset(seed_stream_()); }
  void seed(std::uint64_t s) { seed_stream_.seed(s); }

  virtual std::optional<Pose> pose() const { return std::nullopt; }
  bool done() const { return done_; }
  int steps() const { return steps_; }

 protected:
  bool done_ = true;
  int steps_ = 0;

 private:
  Rng seed_stream_{0};
};

struct EnvParams {
  int max_steps = 400;
  int k_frames = 10;
  double half_width = 1.0;
  double speed = 0.35;
  double ray_range = 8.0;
  int n_rays = 9;
  double turn_degrees = 30.0;
  std::string map_path;  // empty: built-in map for the env

  friend bool operator==(const EnvParams&, const EnvParams&) = default;
};

// Per-name defaults: corridor/color_corridor 400 steps and 10 frames,
// goal_corridor 120 steps and 20 frames, two_zone 200 steps and 1 frame.
EnvParams default_params(const std::string& name);

// "corridor", "color_corridor", "goal_corridor" or "two_zone".
std::unique_ptr<Env> make_env(const std::string& name, const EnvParams& params, std::uint64_t seed);

const std::vector<std::string>& env_names();

}  // namespace samo::envs
