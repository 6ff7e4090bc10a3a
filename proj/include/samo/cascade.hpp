#pragma once

#include <span>
#include <vector>

#include "samo/options.hpp"
#include "samo/rng.hpp"

namespace samo {

// Execution state carried between steps: the index of the option that acted
// last (1-based) and how many consecutive steps it has held control.
struct ExecState {
  int active = 0;
  int dwell = 0;
};

// Every episode begins with the last option as candidate.
inline ExecState episode_start(int option_count) { return {option_count, 0}; }

struct CascadeChoice {
  std::vector<double> action;
  int option = 0;
};

// Proposes from the persisted option, classifies with the full prefix and,
// on non-termination, walks down the prefixes: the earliest option that
// still classifies its own proposal as safe acts. If the full prefix says
// termination, the last option acts.
CascadeChoice select_action_cascade(const options::OptionSource& source,
                                    std::span<const double> state, ExecState& exec, Rng& rng,
                                    bool greedy);

// As above, but an option that just took control keeps it for t_min steps.
CascadeChoice select_action_cascade_tmin(const options::OptionSource& source,
                                         std::span<const double> state, ExecState& exec, int t_min,
                                         Rng& rng, bool greedy);

// Reward seen by the option being trained: 1 when it acted and the earlier
// options would be safe at the next state, else the raw reward.
double shaped_reward(double raw_reward, int next_state_prev_beta, bool acting_is_new_option);

}  // namespace samo
