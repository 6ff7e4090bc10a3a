#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "samo/envs/env.hpp"
#include "samo/sac.hpp"
#include "samo/trainer.hpp"

namespace samo::harness {

struct RunConfig {
  std::string env_name = "corridor";
  envs::EnvParams env = envs::default_params("corridor");
  sac::SacConfig sac;
  std::size_t buffer = 10000;
  SamoConfig samo;
  std::vector<std::uint64_t> seeds = {0};
  std::int64_t total_steps = 150000;
  std::string run_id = "run";

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Keys every config file must set.
const std::vector<std::string>& required_keys();
// Optional keys with documented defaults.
const std::vector<std::string>& optional_keys();

// `key = value` lines; '#' starts a comment. Unknown, duplicate or missing
// keys and out-of-range values raise ConfigError naming the key.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config(const std::string& path);

// Writes every key, so parse_config_text(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

void validate(const RunConfig& config);

}  // namespace samo::harness
