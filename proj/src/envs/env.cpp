#include "samo/envs/env.hpp"

#include "samo/envs/corridor_env.hpp"
#include "samo/envs/goal_corridor_env.hpp"
#include "samo/envs/two_zone_env.hpp"
#include "samo/errors.hpp"

namespace samo::envs {

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::kFailure: return "failure";
    case Outcome::kGoal: return "goal";
    case Outcome::kCap: return "cap";
    case Outcome::kWrongCorridor: return "wrong_corridor";
    case Outcome::kNone: break;
  }
  return "none";
}

const std::vector<std::string>& env_names() {
  static const std::vector<std::string> names{"corridor", "color_corridor", "goal_corridor", "two_zone"};
  return names;
}

EnvParams default_params(const std::string& name) {
  EnvParams p;
  if (name == "goal_corridor") {
    p.max_steps = 120;
    p.k_frames = 20;
  } else if (name == "two_zone") {
    p.max_steps = 200;
    p.k_frames = 1;
  } else if (name != "corridor" && name != "color_corridor") {
    throw ConfigError("unknown environment '" + name + "'");
  }
  return p;
}

std::unique_ptr<Env> make_env(const std::string& name, const EnvParams& params, std::uint64_t seed) {
  if (name == "corridor" || name == "color_corridor") {
    const bool colors = name == "color_corridor";
    CorridorMap map;
    if (!params.map_path.empty()) {
      map = load_corridor_map(params.map_path);
    } else {
      map = colors ? default_color_map() : default_two_turn_map();
      map.half_width = params.half_width;
    }
    return std::make_unique<CorridorEnv>(std::move(map), params, colors, seed);
  }
  if (name == "goal_corridor") return std::make_unique<GoalCorridorEnv>(params, seed);
  if (name == "two_zone") return std::make_unique<TwoZoneEnv>(params.max_steps, seed);
  throw ConfigError("unknown environment '" + name + "'");
}

}  // namespace samo::envs
