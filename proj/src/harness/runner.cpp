#include "samo/harness/runner.hpp"

#include <algorithm>
#include <charconv>
#include <ctime>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "samo/cascade.hpp"
#include "samo/errors.hpp"
#include "samo/harness/metrics.hpp"

namespace samo::harness {

namespace fs = std::filesystem;

std::string metrics_path(const std::string& out_dir, std::uint64_t seed) {
  return (fs::path(out_dir) / ("metrics_seed" + std::to_string(seed) + ".csv")).string();
}

std::string checkpoint_path(const std::string& out_dir, std::uint64_t seed) {
  return (fs::path(out_dir) / ("seed" + std::to_string(seed) + ".ckpt")).string();
}

namespace {

double thread_cpu_seconds() {
  timespec ts{};
  ::clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
  return static_cast<double>(ts.tv_sec) + 1e-9 * static_cast<double>(ts.tv_nsec);
}

void write_manifest(const RunConfig& config, const std::string& out_dir,
                    const std::vector<std::uint64_t>& seeds, const std::vector<SeedSummary>* done) {
  nlohmann::ordered_json m;
  m["run_id"] = config.run_id;
  m["env"] = config.env_name;
  m["config"] = serialize_config(config);
  m["seeds"] = seeds;
  m["total_steps"] = config.total_steps;
  nlohmann::ordered_json files = nlohmann::ordered_json::array();
  for (auto s : seeds) {
    files.push_back({{"seed", s},
                     {"metrics", fs::path(metrics_path(out_dir, s)).filename().string()},
                     {"checkpoint", fs::path(checkpoint_path(out_dir, s)).filename().string()}});
  }
  m["files"] = files;
  if (done) {
    nlohmann::ordered_json results = nlohmann::ordered_json::array();
    for (const auto& s : *done) {
      results.push_back({{"seed", s.seed},
                         {"options", s.options},
                         {"mature", s.mature},
                         {"env_steps", s.env_steps},
                         {"episodes", s.episodes},
                         {"final_window_mean_length", s.final_window_mean},
                         {"cpu_seconds", s.cpu_seconds},
                         {"warnings", s.warnings}});
    }
    m["results"] = results;
  }
  std::ofstream out(fs::path(out_dir) / "manifest.json", std::ios::trunc);
  if (!out) throw UsageError("cannot write manifest in '" + out_dir + "'");
  out << m.dump(2) << '\n';
}

}  // namespace

SeedSummary run_seed(const RunConfig& config, const std::string& out_dir, std::uint64_t seed) {
  const double cpu_start = thread_cpu_seconds();
  SeedSummary summary;
  summary.seed = seed;
  auto env = envs::make_env(config.env_name, config.env, seed);
  Trainer trainer(*env, config.sac, config.samo, config.buffer, seed, config.total_steps);
  options::OptionSet set = trainer.empty_set();

  const std::string ckpt_file = checkpoint_path(out_dir, seed);
  std::int64_t keep_rows = -1;
  if (fs::exists(ckpt_file)) {
    Checkpoint ck = load_checkpoint(ckpt_file);
    if (ck.env_name != config.env_name || ck.options.obs_dim() != env->observation_dim()) {
      throw UsageError("checkpoint '" + ckpt_file + "' belongs to a different environment");
    }
    set = std::move(ck.options);
    trainer.progress() = ck.progress;
    keep_rows = ck.progress.episode;
    summary.resumed = true;
  }

  MetricsWriter writer(metrics_path(out_dir, seed), keep_rows);
  trainer.on_episode([&](const EpisodeRecord& rec) { writer.write(to_row(rec, config.run_id, seed)); });
  trainer.on_freeze([&](const options::OptionSet& s, const Progress& p) {
    save_checkpoint(ckpt_file, Checkpoint{config.env_name, config.env, config.samo.t_min, p, s});
  });
  trainer.train_all(set);

  for (const auto& r : trainer.reports()) {
    if (!r.bce.warning.empty()) {
      summary.warnings.push_back("option " + std::to_string(r.index) + ": " + r.bce.warning);
    }
    if (!r.mature && config.samo.max_options > 1) {
      summary.warnings.push_back("option " + std::to_string(r.index) +
                                 ": step budget ran out before alpha fell below alpha_min");
    }
  }
  summary.options = set.size();
  for (int i = 1; i <= set.size(); ++i) summary.mature.push_back(set.option(i).mature);
  summary.env_steps = trainer.progress().env_step;
  summary.episodes = trainer.progress().episode;
  summary.final_window_mean =
      final_window_mean(read_metrics(metrics_path(out_dir, seed)), config.total_steps);
  summary.cpu_seconds = thread_cpu_seconds() - cpu_start;
  return summary;
}

RunSummary run_experiment(const RunConfig& config, const std::string& out_dir,
                          std::optional<std::uint64_t> only_seed) {
  validate(config);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) {
    throw UsageError("cannot create output directory '" + out_dir + "'");
  }
  {
    const fs::path probe = fs::path(out_dir) / ".write_probe";
    std::ofstream p(probe);
    if (!p) throw UsageError("output directory '" + out_dir + "' is not writable");
    p.close();
    fs::remove(probe, ec);
  }

  const std::vector<std::uint64_t> seeds =
      only_seed ? std::vector<std::uint64_t>{*only_seed} : config.seeds;
  write_manifest(config, out_dir, seeds, nullptr);

  RunSummary summary;
  summary.out_dir = out_dir;
  summary.seeds.resize(seeds.size());
  std::vector<std::string> errors(seeds.size());
  // Seeds share nothing mutable, so they can run side by side.
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    try {
      summary.seeds[i] = run_seed(config, out_dir, seeds[i]);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (!errors[i].empty()) {
      throw std::runtime_error("seed " + std::to_string(seeds[i]) + ": " + errors[i]);
    }
  }
  write_manifest(config, out_dir, seeds, &summary.seeds);
  return summary;
}

std::unique_ptr<envs::Env> env_for(const Checkpoint& ckpt, const std::string& env_name,
                                   std::uint64_t seed) {
  envs::EnvParams params = env_name == ckpt.env_name ? ckpt.env : envs::default_params(env_name);
  if (env_name != ckpt.env_name) params.k_frames = ckpt.env.k_frames;
  auto env = envs::make_env(env_name, params, seed);
  if (env->observation_dim() != ckpt.options.obs_dim() ||
      !(env->action_space() == ckpt.options.action_space())) {
    throw UsageError("environment '" + env_name + "' does not match the checkpoint's observation " +
                     "or action space");
  }
  if (ckpt.options.empty()) throw UsageError("checkpoint holds no options");
  return env;
}

EvalReport evaluate(const Checkpoint& ckpt, const std::string& env_name, int episodes, bool greedy,
                    std::uint64_t seed) {
  if (episodes < 1) throw UsageError("episodes must be >= 1");
  auto env = env_for(ckpt, env_name, seed);
  const auto& set = ckpt.options;
  Rng episode_rng = make_rng(seed, Stream::kEnv, 0xE7A1);
  Rng act_rng = make_rng(seed, Stream::kPolicy, 0xE7A1);

  EvalReport rep;
  rep.episodes = episodes;
  rep.min_length = env->max_steps() + 1;
  std::vector<std::int64_t> occ(set.size(), 0);
  std::int64_t total = 0;
  int goals = 0;
  for (int e = 0; e < episodes; ++e) {
    std::vector<double> obs = env->reset(episode_rng());
    ExecState exec = episode_start(set.size());
    int len = 0;
    for (;;) {
      const CascadeChoice c = select_action_cascade_tmin(set, obs, exec, ckpt.t_min, act_rng, greedy);
      const envs::StepResult r = env->step(c.action);
      ++len;
      ++occ[c.option - 1];
      rep.mean_return += r.reward;
      if (r.done) {
        if (r.info == envs::Outcome::kGoal) ++goals;
        break;
      }
      obs = r.observation;
    }
    total += len;
    rep.min_length = std::min(rep.min_length, len);
    rep.max_length = std::max(rep.max_length, len);
  }
  rep.mean_length = static_cast<double>(total) / episodes;
  rep.mean_return /= episodes;
  rep.success_rate = static_cast<double>(goals) / episodes;
  for (auto c : occ) rep.occupancy.push_back(static_cast<double>(c) / static_cast<double>(total));
  return rep;
}

void export_trace(const Checkpoint& ckpt, const std::string& out_csv, std::uint64_t seed,
                  bool greedy) {
  auto env = env_for(ckpt, ckpt.env_name, seed);
  std::ofstream out(out_csv, std::ios::trunc);
  if (!out) throw UsageError("cannot write trace '" + out_csv + "'");
  const auto& set = ckpt.options;
  Rng act_rng = make_rng(seed, Stream::kPolicy, 0x7ACE);
  auto fmt = [](double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
  };
  auto pose_fields = [&]() -> std::string {
    const auto p = env->pose();
    if (!p) return ",,";
    return fmt(p->x) + "," + fmt(p->y) + "," + fmt(p->heading);
  };

  out << "step,x,y,theta,action,reward,active_option\n";
  std::vector<double> obs = env->reset(make_rng(seed, Stream::kEnv, 0x7ACE)());
  out << 0 << ',' << pose_fields() << ",,0,\n";
  ExecState exec = episode_start(set.size());
  for (int step = 1;; ++step) {
    const CascadeChoice c = select_action_cascade_tmin(set, obs, exec, ckpt.t_min, act_rng, greedy);
    const envs::StepResult r = env->step(c.action);
    std::string action;
    for (std::size_t i = 0; i < c.action.size(); ++i) {
      if (i) action += ';';
      action += fmt(c.action[i]);
    }
    out << step << ',' << pose_fields() << ',' << action << ',' << fmt(r.reward) << ','
        << c.option << '\n';
    if (r.done) break;
    obs = r.observation;
  }
}

}  // namespace samo::harness
