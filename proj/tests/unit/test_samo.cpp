#include <doctest.h>

#include <algorithm>

#include "samo/cascade.hpp"
#include "samo/envs/env.hpp"
#include "samo/errors.hpp"
#include "samo/trainer.hpp"
#include "support/scripted.hpp"

using namespace samo;

namespace {

const std::vector<double> kS = {0.0};

int argmax(const std::vector<double>& v) {
  return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

TEST_CASE("cascade: earliest capable option acts") {
  testing::MockSource src(3);
  src.verdicts = {{{3, 3}, 0}, {{2, 2}, 0}, {{1, 1}, 0}};
  ExecState ex = episode_start(3);
  Rng rng(0);
  const auto c = select_action_cascade(src, kS, ex, rng, true);
  CHECK(c.option == 1);
  CHECK(c.action[0] == 1.0);
  CHECK(ex.active == 1);
}

TEST_CASE("cascade: the walk stops where the earlier prefix terminates") {
  testing::MockSource src(3);
  src.verdicts = {{{3, 3}, 0}, {{2, 2}, 0}, {{1, 1}, 1}};
  ExecState ex = episode_start(3);
  Rng rng(0);
  const auto c = select_action_cascade(src, kS, ex, rng, true);
  CHECK(c.option == 2);
  CHECK(c.action[0] == 2.0);
}

TEST_CASE("cascade: full termination falls back to the last option") {
  testing::MockSource src(3);  // every verdict is termination
  ExecState ex = episode_start(3);
  Rng rng(0);
  const auto c = select_action_cascade(src, kS, ex, rng, true);
  CHECK(c.option == 3);
  CHECK(c.action[0] == 3.0);
}

TEST_CASE("cascade: a persisted option judged unsafe hands over to the last option") {
  testing::MockSource src(3);
  ExecState ex{1, 4};
  Rng rng(0);
  const auto c = select_action_cascade(src, kS, ex, rng, true);
  CHECK(c.option == 3);
  CHECK(c.action[0] == 3.0);
  CHECK(ex.dwell == 1);
}

TEST_CASE("cascade: a persisted option judged safe starts the walk from its own proposal") {
  testing::MockSource src(3);
  src.verdicts = {{{3, 2}, 0}, {{2, 2}, 0}, {{2, 3}, 0}, {{1, 1}, 1}};
  ExecState ex{2, 1};
  Rng rng(0);
  const auto c = select_action_cascade(src, kS, ex, rng, true);
  // The candidate resets to 3 but keeps option 2's action; option 2's own
  // prefix then accepts it and the walk ends at option 2.
  CHECK(c.option == 2);
  CHECK(c.action[0] == 2.0);
  CHECK(ex.dwell == 2);
}

TEST_CASE("t_min 1 behaves exactly like the plain cascade") {
  testing::MockSource a(3), b(3);
  a.rule = b.rule = [](int prefix, std::span<const double> s, int act) {
    return (prefix + act + static_cast<int>(s[0])) % 2;
  };
  ExecState ea = episode_start(3), eb = episode_start(3);
  Rng ra(1), rb(1);
  for (int t = 0; t < 30; ++t) {
    const std::vector<double> s = {static_cast<double>(t % 5)};
    const auto x = select_action_cascade(a, s, ea, ra, true);
    const auto y = select_action_cascade_tmin(b, s, eb, 1, rb, true);
    CHECK(x.option == y.option);
    CHECK(x.action == y.action);
    CHECK(ea.active == eb.active);
    CHECK(ea.dwell == eb.dwell);
  }
}

TEST_CASE("t_min 16 holds the chosen option for 16 steps") {
  testing::MockSource src(3);
  bool option_one_safe = true;
  src.rule = [&](int prefix, std::span<const double>, int act) {
    if (prefix == 1 && act == 1) return option_one_safe ? 0 : 1;
    return prefix == 3 ? 0 : (prefix == 2 && act == 2 ? 0 : 1);
  };
  ExecState ex = episode_start(3);
  Rng rng(0);
  std::vector<int> trace;
  for (int t = 0; t < 40; ++t) {
    if (t == 1) option_one_safe = false;  // option 1 loses its claim right away
    trace.push_back(select_action_cascade_tmin(src, kS, ex, 16, rng, true).option);
  }
  for (int t = 0; t < 16; ++t) CHECK(trace[t] == 1);
  CHECK(trace[16] == 2);
  CHECK(ex.active == 2);
  // After the switch the dwell counter restarted, so option 2 keeps control.
  for (int t = 16; t < 32; ++t) CHECK(trace[t] == 2);
  CHECK_THROWS_AS(select_action_cascade_tmin(src, kS, ex, 0, rng, true), UsageError);
}

TEST_CASE("dwell counter resets on a switch") {
  testing::MockSource src(2);
  ExecState ex = episode_start(2);
  Rng rng(0);
  select_action_cascade(src, kS, ex, rng, true);
  select_action_cascade(src, kS, ex, rng, true);
  CHECK(ex.dwell == 2);
  src.verdicts = {{{2, 2}, 0}, {{1, 1}, 0}};
  select_action_cascade(src, kS, ex, rng, true);
  CHECK(ex.active == 1);
  CHECK(ex.dwell == 1);
}

TEST_CASE("shaped reward") {
  CHECK(shaped_reward(0.0, 0, true) == 1.0);
  CHECK(shaped_reward(0.0, 1, true) == 0.0);
  CHECK(shaped_reward(-1.0, 1, true) == -1.0);
  CHECK(shaped_reward(0.0, 0, false) == 0.0);
  for (double r : {-1.0, 0.0}) {
    for (int b : {0, 1}) {
      for (bool n : {false, true}) {
        const double v = shaped_reward(r, b, n);
        CHECK((v == -1.0 || v == 0.0 || v == 1.0));
      }
    }
  }
}

TEST_CASE("greedy cascade is deterministic for a given state and execution state") {
  Rng rng(5);
  const ActionSpace box = ActionSpace::continuous_box(1);
  options::OptionSet set(box, 4, 0.95);
  for (int i = 1; i <= 3; ++i) {
    set.append({policy::make_head(box, 4, {8}, rng), 0.05, true},
               options::TerminationFn(box, 4, {8}, i, rng));
  }
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> s(4);
    for (auto& x : s) x = 2 * uniform01(rng) - 1;
    ExecState a{1 + trial % 3, trial % 4}, b = a;
    Rng r1(trial), r2(trial + 1000);
    const auto x = select_action_cascade(set, s, a, r1, true);
    const auto y = select_action_cascade(set, s, b, r2, true);
    CHECK(x.action == y.action);
    CHECK(x.option == y.option);
  }
}

// ---------------------------------------------------------------- training

namespace {

constexpr int kStates = 6;

SamoConfig small_samo(int max_options) {
  SamoConfig c;
  c.max_options = max_options;
  c.warmup = 5;
  c.step_budget = 60;
  c.beta_hidden = {};
  c.bce_epochs = 2;
  c.continue_last = false;
  return c;
}

sac::SacConfig small_sac() {
  sac::SacConfig c;
  c.hidden = {8};
  c.batch = 4;
  return c;
}

// One frozen option whose prefix function terminates exactly on `terminating`.
options::OptionSet one_option_set(const std::vector<int>& terminating) {
  const ActionSpace box = ActionSpace::continuous_box(1);
  Rng rng(17);
  options::OptionSet set(box, kStates, 0.95);
  options::TerminationFn fn(box, kStates, {}, 1, rng);
  testing::script_termination(fn, kStates, terminating);
  set.append({policy::make_head(box, kStates, {8}, rng), 0.05, true}, fn);
  return set;
}

}  // namespace

TEST_CASE("first option trains on every step and never shapes") {
  testing::ScriptedEnv env(kStates, 25, {5});
  Trainer tr(env, small_sac(), small_samo(1), 1000, 3, 100000);
  std::vector<StepRecord> steps;
  tr.on_step([&](const StepRecord& r) { steps.push_back(r); });
  auto set = tr.empty_set();
  const auto rep = tr.train_option(set);
  REQUIRE_FALSE(steps.empty());
  for (const auto& s : steps) {
    CHECK(s.stored);
    CHECK(s.active_option == 1);
    CHECK(s.stored_reward == s.reward);
  }
  CHECK(rep.delegated == 0);
  CHECK(rep.stored == static_cast<std::int64_t>(steps.size()));
}

TEST_CASE("delegated steps are never stored and trained steps always are") {
  testing::ScriptedEnv env(kStates, 30);
  const std::vector<int> terminating = {2, 3};
  auto set = one_option_set(terminating);
  Trainer tr(env, small_sac(), small_samo(2), 1000, 4, 100000);
  std::vector<StepRecord> steps;
  tr.on_step([&](const StepRecord& r) { steps.push_back(r); });
  const auto rep = tr.train_option(set);
  REQUIRE(steps.size() == 60);
  std::int64_t stored = 0;
  for (const auto& s : steps) {
    const int id = argmax(s.state);
    const bool trained = id == 2 || id == 3;
    CHECK(s.stored == trained);
    CHECK(s.active_option == (trained ? 2 : 1));
    stored += s.stored;
  }
  CHECK(rep.stored == stored);
  CHECK(rep.delegated == 60 - stored);
}

TEST_CASE("reward 1 when the new option reaches a state the earlier options can handle") {
  testing::ScriptedEnv env(kStates, 30);
  auto set = one_option_set({2, 3});
  Trainer tr(env, small_sac(), small_samo(2), 1000, 5, 100000);
  std::vector<StepRecord> steps;
  tr.on_step([&](const StepRecord& r) { steps.push_back(r); });
  tr.train_option(set);
  int checked = 0;
  for (const auto& s : steps) {
    const int id = argmax(s.state);
    if (id == 3) {
      CHECK(s.stored_reward == 1.0);  // next state 4 is handled by option 1
      ++checked;
    } else if (id == 2) {
      CHECK(s.stored_reward == 0.0);  // next state 3 still terminates
      ++checked;
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("shaping off stores raw rewards") {
  testing::ScriptedEnv env(kStates, 30);
  auto set = one_option_set({2, 3});
  auto cfg = small_samo(2);
  cfg.shaping = false;
  Trainer tr(env, small_sac(), cfg, 1000, 5, 100000);
  std::vector<StepRecord> steps;
  tr.on_step([&](const StepRecord& r) { steps.push_back(r); });
  tr.train_option(set);
  for (const auto& s : steps) {
    if (s.stored) CHECK(s.stored_reward == s.reward);
  }
}

TEST_CASE("the training hold keeps whichever option acts for t_min steps") {
  const std::vector<int> terminating = {2, 3};
  for (int t_min : {1, 4}) {
    testing::ScriptedEnv env(kStates, 30);
    auto set = one_option_set(terminating);
    auto cfg = small_samo(2);
    cfg.t_min = t_min;
    cfg.t_min_training = true;
    Trainer tr(env, small_sac(), cfg, 1000, 6, 100000);
    std::vector<StepRecord> steps;
    tr.on_step([&](const StepRecord& r) { steps.push_back(r); });
    tr.train_option(set);
    REQUIRE(steps.size() == 60);

    // Replays the hold rule on the scripted state sequence.
    int held = 0, dwell = 0;
    for (std::size_t i = 0; i < steps.size(); ++i) {
      if (i % 30 == 0) held = dwell = 0;
      const int id = argmax(steps[i].state);
      const bool safe = id != 2 && id != 3;
      const int actor = (dwell >= 1 && dwell < t_min) ? held : (safe ? 1 : 2);
      dwell = actor == held ? dwell + 1 : 1;
      held = actor;
      CHECK(steps[i].active_option == actor);
      CHECK(steps[i].stored == (actor == 2));
    }
  }
}

TEST_CASE("the training hold changes nothing when t_min is 1") {
  auto run = [](bool hold) {
    testing::ScriptedEnv env(kStates, 30);
    auto set = one_option_set({2, 3});
    auto cfg = small_samo(2);
    cfg.t_min_training = hold;
    Trainer tr(env, small_sac(), cfg, 1000, 8, 100000);
    std::vector<std::pair<std::vector<double>, int>> trace;
    tr.on_step([&](const StepRecord& r) { trace.emplace_back(r.action, r.active_option); });
    tr.train_option(set);
    return trace;
  };
  CHECK(run(true) == run(false));
}

TEST_CASE("training a new option leaves frozen options untouched") {
  testing::ScriptedEnv env(kStates, 30, {4});
  Trainer tr(env, small_sac(), small_samo(3), 1000, 6, 100000);
  auto set = tr.empty_set();
  tr.train_option(set);
  tr.train_option(set);
  const auto pol1 = policy::head_net(set.option(1).head), pol2 = policy::head_net(set.option(2).head);
  const auto b1 = set.termination(1).net(), b2 = set.termination(2).net();
  const double c1 = pol1.checksum(), c2 = b2.checksum();
  tr.train_option(set);
  CHECK(policy::head_net(set.option(1).head) == pol1);
  CHECK(policy::head_net(set.option(2).head) == pol2);
  CHECK(set.termination(1).net() == b1);
  CHECK(set.termination(2).net() == b2);
  CHECK(policy::head_net(set.option(1).head).checksum() == c1);
  CHECK(set.termination(2).net().checksum() == c2);
}

TEST_CASE("train_all yields max_options options and prefix functions") {
  testing::ScriptedEnv env(kStates, 30, {4});
  Trainer tr(env, small_sac(), small_samo(3), 1000, 7, 100000);
  int frozen = 0;
  tr.on_freeze([&](const options::OptionSet&, const Progress&) { ++frozen; });
  std::vector<EpisodeRecord> episodes;
  tr.on_episode([&](const EpisodeRecord& e) { episodes.push_back(e); });
  const auto set = tr.train_all();
  CHECK(set.size() == 3);
  CHECK(set.termination(3).prefix_length() == 3);
  CHECK(frozen == 3);
  int events = 0;
  std::int64_t last = 0;
  for (const auto& e : episodes) {
    CHECK(e.length >= 1);
    CHECK(e.env_step >= last);
    last = e.env_step;
    events += std::count(e.events.begin(), e.events.end(), "option_frozen");
  }
  CHECK(events == 3);
  CHECK(SamoConfig{}.value_stop == 0.0);
}

TEST_CASE("an option that never matures is frozen and flagged") {
  testing::ScriptedEnv env(kStates, 30, {4});
  auto cfg = small_samo(2);
  cfg.alpha_min = 1e-3;
  Trainer tr(env, small_sac(), cfg, 1000, 8, 100000);
  auto set = tr.empty_set();
  const auto rep = tr.train_option(set);
  CHECK_FALSE(rep.mature);
  CHECK_FALSE(set.option(1).mature);
  CHECK(rep.steps == cfg.step_budget);
}

TEST_CASE("a single option is step-for-step plain SAC") {
  const std::uint64_t seed = 11;
  envs::EnvParams params = envs::default_params("corridor");
  params.max_steps = 40;
  params.k_frames = 2;
  sac::SacConfig sc;
  sc.hidden = {16, 16};
  sc.batch = 8;
  SamoConfig mc;
  mc.max_options = 1;
  mc.shaping = false;
  mc.warmup = 50;
  mc.step_budget = 1000000;
  const std::int64_t total = 400;
  const std::size_t capacity = 300;

  auto env_a = envs::make_env("corridor", params, seed);
  Trainer tr(*env_a, sc, mc, capacity, seed, total);
  std::vector<StepRecord> samo_steps;
  tr.on_step([&](const StepRecord& r) { samo_steps.push_back(r); });
  tr.train_all();

  // Textbook loop: act, step, store, update, on the same random streams.
  auto env_b = envs::make_env("corridor", params, seed);
  Rng init = make_rng(seed, Stream::kInit, 1);
  Rng env_rng = make_rng(seed, Stream::kEnv, 1);
  Rng pol = make_rng(seed, Stream::kPolicy, 1);
  Rng rep = make_rng(seed, Stream::kReplay, 1);
  sac::SacLearner learner(env_b->action_space(), env_b->observation_dim(), sc, init);
  ReplayBuffer buffer(capacity);
  auto choose = [&](const std::vector<double>& o) {
    if (static_cast<int>(buffer.size()) < mc.warmup) return std::vector<double>{2.0 * uniform01(pol) - 1.0};
    return policy::act(learner.policy(), o, pol, false).action;
  };
  std::int64_t stored = 0;
  std::vector<double> obs = env_b->reset(env_rng());
  std::vector<double> a = choose(obs);
  REQUIRE(samo_steps.size() == static_cast<std::size_t>(total));
  for (std::int64_t t = 0; t < total; ++t) {
    const auto res = env_b->step(a);
    CHECK(samo_steps[t].state == obs);
    CHECK(samo_steps[t].action == a);
    CHECK(samo_steps[t].reward == res.reward);
    Transition tr_;
    tr_.state = obs;
    tr_.action = a;
    tr_.next_state = res.observation;
    tr_.reward = res.reward;
    tr_.done = res.done && res.info != envs::Outcome::kCap;
    tr_.next_action = {0.0};
    buffer.push(tr_);
    ++stored;
    if (stored >= mc.warmup && buffer.size() >= static_cast<std::size_t>(sc.batch)) {
      const auto batch = buffer.sample(sc.batch, rep);
      learner.update_critics(batch, pol);
      learner.update_policy(batch, pol);
      learner.update_alpha(batch, pol);
      learner.soft_update_targets();
    }
    obs = res.done ? env_b->reset(env_rng()) : res.observation;
    a = choose(obs);
  }
}
