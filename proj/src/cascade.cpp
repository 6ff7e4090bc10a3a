#include "samo/cascade.hpp"

#include "samo/errors.hpp"

namespace samo {

CascadeChoice select_action_cascade(const options::OptionSource& source,
                                    std::span<const double> state, ExecState& exec, Rng& rng,
                                    bool greedy) {
  const int k = source.option_count();
  if (k < 1) throw UsageError("cascade needs at least one option");
  int i = (exec.active >= 1 && exec.active <= k) ? exec.active : k;

  std::vector<double> action = source.propose(i, state, rng, greedy);
  const int full = source.classify(k, state, action);
  if (full == 1 && i != k) {
    // The persisted option is unsafe according to every prefix: hand over.
    action = source.propose(k, state, rng, greedy);
  }
  i = k;
  if (full == 0) {
    while (i > 1) {
      std::vector<double> earlier = source.propose(i - 1, state, rng, greedy);
      if (source.classify(i - 1, state, earlier) == 1) break;
      action = std::move(earlier);
      --i;
    }
  }

  exec.dwell = (i == exec.active) ? exec.dwell + 1 : 1;
  exec.active = i;
  return {std::move(action), i};
}

CascadeChoice select_action_cascade_tmin(const options::OptionSource& source,
                                         std::span<const double> state, ExecState& exec, int t_min,
                                         Rng& rng, bool greedy) {
  if (t_min < 1) throw UsageError("t_min must be at least 1");
  const int k = source.option_count();
  const bool holding = exec.active >= 1 && exec.active <= k && exec.dwell >= 1 &&
                       exec.dwell < t_min;
  if (!holding) return select_action_cascade(source, state, exec, rng, greedy);
  CascadeChoice c{source.propose(exec.active, state, rng, greedy), exec.active};
  ++exec.dwell;
  return c;
}

double shaped_reward(double raw_reward, int next_state_prev_beta, bool acting_is_new_option) {
  if (acting_is_new_option && next_state_prev_beta == 0) return 1.0;
  return raw_reward;
}

}  // namespace samo
