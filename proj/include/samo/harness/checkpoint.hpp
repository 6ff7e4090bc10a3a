#pragma once

#include <cstdint>
#include <string>

#include "samo/envs/env.hpp"
#include "samo/options.hpp"
#include "samo/trainer.hpp"

namespace samo::harness {

struct Checkpoint {
  std::string env_name;
  envs::EnvParams env;
  int t_min = 1;
  Progress progress;
  options::OptionSet options{ActionSpace{}, 1, 0.95};
};

// "SAMO1", u32 option count, then per option its policy fragment followed by
// its prefix termination fragment, then a trailer with the environment,
// execution settings, per-option temperature and maturity, and progress.
void save_checkpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace samo::harness
