#include "samo/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "samo/errors.hpp"
#include "samo/replay_buffer.hpp"

namespace samo {

namespace {

// What the composite agent does in one state while option k trains.
struct Decision {
  std::vector<double> action;
  int option = 0;
  int prev_beta = 1;  // earlier prefix's verdict on the delegated proposal
  bool to_new = true;  // the new option acts; differs from prev_beta only under a hold
};

// Which option of the whole set (new one included) holds control, and for
// how many consecutive steps.
struct Hold {
  int option = 0;
  int dwell = 0;
};

}  // namespace

Trainer::Trainer(envs::Env& env, sac::SacConfig sac, SamoConfig samo, std::size_t replay_capacity,
                 std::uint64_t seed, std::int64_t total_steps)
    : env_(env),
      sac_(std::move(sac)),
      samo_(std::move(samo)),
      replay_capacity_(replay_capacity),
      seed_(seed),
      total_steps_(total_steps) {
  if (samo_.max_options < 1) throw ConfigError("max_options must be at least 1");
  if (samo_.t_min < 1) throw ConfigError("t_min must be at least 1");
  if (replay_capacity_ == 0) throw ConfigError("replay capacity must be positive");
  if (samo_.warmup < 0) throw ConfigError("warmup must be non-negative");
}

options::OptionSet Trainer::empty_set() const {
  return options::OptionSet(env_.action_space(), env_.observation_dim(), samo_.gamma_beta);
}

std::vector<double> Trainer::random_action(Rng& rng) const {
  const ActionSpace space = env_.action_space();
  if (space.continuous()) {
    std::vector<double> a(space.size);
    for (auto& x : a) x = 2.0 * uniform01(rng) - 1.0;
    return a;
  }
  const int idx = std::min(space.size - 1, static_cast<int>(uniform01(rng) * space.size));
  return {static_cast<double>(idx)};
}

void Trainer::emit(EpisodeRecord rec) {
  rec.events.insert(rec.events.end(), pending_events_.begin(), pending_events_.end());
  pending_events_.clear();
  rec.episode = progress_.episode++;
  if (episode_sink_) episode_sink_(rec);
}

OptionReport Trainer::train_option(options::OptionSet& set) {
  const int k = set.size() + 1;
  const bool has_prev = k > 1;
  const bool last = k >= samo_.max_options;
  const bool run_to_end = last && samo_.continue_last;
  const ActionSpace space = env_.action_space();
  const auto salt = static_cast<std::uint64_t>(k);

  Rng init_rng = make_rng(seed_, Stream::kInit, salt);
  Rng env_rng = make_rng(seed_, Stream::kEnv, salt);
  Rng policy_rng = make_rng(seed_, Stream::kPolicy, salt);
  Rng replay_rng = make_rng(seed_, Stream::kReplay, salt);
  Rng rollout_rng = make_rng(seed_, Stream::kRollout, salt);

  sac::SacLearner learner(space, env_.observation_dim(), sac_, init_rng);
  options::TerminationFn beta = options::warm_start_prefix(set, samo_.beta_hidden, init_rng);
  ReplayBuffer buffer(replay_capacity_);

  OptionReport report;
  report.index = k;
  std::int64_t option_steps = 0;
  ExecState exec = episode_start(k - 1);
  const bool hold_enabled = has_prev && samo_.t_min_training && samo_.t_min > 1;
  Hold hold;

  // The frozen options' half of a decision: their cascade proposal and the
  // previous prefix's verdict on it. No previous options means verdict 1.
  // An unexpired hold overrides who acts but not the verdict.
  auto delegate = [&](std::span<const double> obs, ExecState& ex, const Hold& h) {
    Decision d;
    if (!has_prev) return d;
    const bool held = hold_enabled && h.dwell >= 1 && h.dwell < samo_.t_min;
    ExecState probe = ex;
    CascadeChoice c = select_action_cascade(set, obs, held ? probe : ex, policy_rng, false);
    d.prev_beta = set.classify(k - 1, obs, c.action);
    d.to_new = d.prev_beta == 1;
    d.action = std::move(c.action);
    d.option = c.option;
    if (held) {
      d.to_new = h.option == k;
      if (!d.to_new && h.option != d.option) {
        d.action = set.propose(h.option, obs, policy_rng, false);
        d.option = h.option;
      }
      if (!d.to_new) ex = {h.option, ex.active == h.option ? ex.dwell + 1 : 1};
    }
    return d;
  };
  auto advance = [](Hold& h, int option) { h = {option, h.option == option ? h.dwell + 1 : 1}; };
  // Hands the step to the new option when the frozen ones would terminate.
  auto complete = [&](Decision& d, std::span<const double> obs, ExecState& ex, bool mode) {
    if (!d.to_new) return;
    if (report.stored < samo_.warmup) {
      d.action = mode ? std::vector<double>(space.stored_size(), 0.0) : random_action(policy_rng);
    } else {
      d.action = mode ? policy::act(learner.policy(), obs, policy_rng, true).action
                      : policy::act(learner.policy(), obs, policy_rng, false).action;
    }
    d.option = k;
    if (has_prev) ex.active = 1;
  };

  std::vector<double> obs = env_.reset(env_rng());
  Decision cur = delegate(obs, exec, hold);
  complete(cur, obs, exec, false);
  advance(hold, cur.option);
  EpisodeRecord row;
  row.option_hist.assign(k, 0);
  std::optional<EpisodeRecord> final_row;

  for (;;) {
    const bool new_acts = cur.option == k;
    envs::StepResult res = env_.step(cur.action);
    ++progress_.env_step;
    ++option_steps;
    const bool terminal = res.done && res.info != envs::Outcome::kCap;

    // Truncated episodes still need the successor for the termination
    // target; work it out on a scratch execution state.
    ExecState scratch = exec;
    std::optional<Decision> next;
    if (!res.done) {
      next = delegate(res.observation, exec, hold);
    } else if (!terminal && new_acts) {
      next = delegate(res.observation, scratch, hold);
    }

    StepRecord srec;
    srec.env_step = progress_.env_step;
    srec.reward = res.reward;
    srec.active_option = cur.option;
    srec.info = res.info;

    // Set when the stored transition still waits for its successor action.
    bool awaiting_successor = false;
    if (new_acts) {
      // A terminal next state has no safe continuation.
      const int next_prev_beta = next ? next->prev_beta : 1;
      double r = res.reward;
      if (has_prev && samo_.shaping) r = shaped_reward(r, next_prev_beta, true);
      Transition t;
      t.state = obs;
      t.action = cur.action;
      t.next_state = res.observation;
      t.reward = r;
      t.termination_reward = envs::is_failure(res.info) ? 1.0 : 0.0;
      t.done = terminal;
      if (next && !next->to_new) {
        t.next_action = next->action;
      } else {
        // Zeros until the successor is known; also the terminal convention.
        t.next_action.assign(space.stored_size(), 0.0);
        awaiting_successor = !terminal;
      }
      buffer.push(std::move(t));
      srec.stored = true;
      srec.stored_reward = r;
      ++report.stored;
      if (report.stored >= samo_.warmup && buffer.size() >= static_cast<std::size_t>(sac_.batch)) {
        const TransitionBatch batch = buffer.sample(sac_.batch, replay_rng);
        learner.update_critics(batch, policy_rng);
        learner.update_policy(batch, policy_rng);
        learner.update_alpha(batch, policy_rng);
        learner.soft_update_targets();
        options::td_update_beta(beta, batch, samo_.gamma_beta, sac_.lr);
        ++report.updates;
        if (!report.mature && learner.is_mature(samo_.alpha_min)) report.mature = true;
      }
    } else {
      ++report.delegated;
    }
    if (step_sink_) {
      srec.state = obs;
      srec.action = cur.action;
      step_sink_(srec);
    }

    ++row.length;
    row.ret += res.reward;
    ++row.option_hist[cur.option - 1];

    if (!res.done) {
      complete(*next, res.observation, exec, false);
      advance(hold, next->option);
    } else if (awaiting_successor) {
      // The truncated episode is over, so take the mode without using noise.
      complete(*next, res.observation, scratch, true);
    }
    if (awaiting_successor) buffer.latest().next_action = next->action;

    const bool stop = progress_.env_step >= total_steps_ ||
                      (!run_to_end && (report.mature || option_steps >= samo_.step_budget));
    if (res.done || stop) {
      row.env_step = progress_.env_step;
      row.alpha = learner.alpha();
      row.option_count = k;
      if (stop) {
        final_row = std::move(row);
        break;
      }
      emit(std::move(row));
      row = EpisodeRecord{};
      row.option_hist.assign(k, 0);
      obs = env_.reset(env_rng());
      exec = episode_start(k - 1);
      hold = Hold{};
      cur = delegate(obs, exec, hold);
      complete(cur, obs, exec, false);
      advance(hold, cur.option);
    } else {
      obs = std::move(res.observation);
      cur = std::move(*next);
    }
  }

  report.steps = option_steps;
  report.alpha = learner.alpha();
  options::Option frozen{learner.policy(), learner.alpha(), report.mature};
  set.append(std::move(frozen), std::move(beta));

  // A single-option run is plain SAC: no prefix training and no option events.
  const bool baseline = samo_.max_options == 1;
  options::LabelPool pool;
  if (!baseline) collect_labels(set, k, pool, rollout_rng);
  report.pool_size = pool.size();
  if (!baseline && (k > 1 || samo_.bce_first)) {
    report.bce = options::bce_train_beta(set.termination(k), pool, samo_.bce_epochs,
                                         samo_.bce_batch, sac_.lr, rollout_rng);
    report.bce_ran = true;
  }
  if (!pool.items().empty()) {
    double sum = 0.0;
    for (const auto& s : pool.items()) {
      const std::span<const double> state(s.input.data(), env_.observation_dim());
      sum += std::abs(learner.state_value(state, rollout_rng));
    }
    report.mean_abs_value = sum / static_cast<double>(pool.size());
  }

  if (!baseline) final_row->events.push_back("option_frozen");
  if (report.bce_ran && !report.bce.skipped) final_row->events.push_back("bce_done");
  emit(std::move(*final_row));

  reports_.push_back(report);
  if (freeze_sink_) freeze_sink_(set, progress_);
  return report;
}

void Trainer::collect_labels(const options::OptionSet& set, int k, options::LabelPool& pool,
                             Rng& rng) {
  const ActionSpace space = set.action_space();
  const std::size_t want = pool.capacity();
  const std::int64_t step_limit = 20 * static_cast<std::int64_t>(want);
  std::size_t pushed = 0;
  std::int64_t steps = 0;
  while (pushed < want && steps < step_limit) {
    std::vector<double> obs = env_.reset(rng());
    ExecState exec = episode_start(k);
    std::vector<std::vector<double>> inputs;
    envs::Outcome outcome = envs::Outcome::kNone;
    for (;;) {
      CascadeChoice c = select_action_cascade_tmin(set, obs, exec, samo_.t_min, rng, false);
      inputs.push_back(state_action(space, obs, c.action));
      envs::StepResult res = env_.step(c.action);
      ++steps;
      ++progress_.env_step;
      if (res.done) {
        outcome = res.info;
        break;
      }
      obs = std::move(res.observation);
    }
    const auto labels = options::geometric_labels(static_cast<int>(inputs.size()),
                                                  samo_.gamma_beta, envs::is_failure(outcome));
    for (std::size_t t = 0; t < inputs.size(); ++t) {
      pool.push({std::move(inputs[t]), labels[t]});
    }
    pushed += inputs.size();
  }
}

void Trainer::train_all(options::OptionSet& set) {
  while (set.size() < samo_.max_options && progress_.env_step < total_steps_) {
    const OptionReport r = train_option(set);
    if (samo_.value_stop > 0.0 && r.mean_abs_value < samo_.value_stop) break;
  }
}

options::OptionSet Trainer::train_all() {
  options::OptionSet set = empty_set();
  train_all(set);
  return set;
}

}  // namespace samo
