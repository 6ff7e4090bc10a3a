#include <CLI11.hpp>
#include <cstdio>
#include <iostream>

#include "samo/errors.hpp"
#include "samo/harness/config.hpp"
#include "samo/harness/metrics.hpp"
#include "samo/harness/runner.hpp"

using namespace samo::harness;

int main(int argc, char** argv) {
  CLI::App app{"Sequential stay-alive option learning"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::int64_t seed = -1;
  auto* train = app.add_subcommand("train", "train options for every configured seed");
  train->add_option("--config", config_path, "config file")->required()->check(CLI::ExistingFile);
  train->add_option("--seed", seed, "train only this seed");
  train->add_option("--out", out_dir, "output directory")->required();

  std::string ckpt_path, env_name;
  int episodes = 100;
  bool greedy = false;
  std::uint64_t eval_seed = 0;
  auto* eval = app.add_subcommand("eval", "evaluate a checkpoint with the option cascade");
  eval->add_option("--checkpoint", ckpt_path)->required()->check(CLI::ExistingFile);
  eval->add_option("--env", env_name)->required();
  eval->add_option("--episodes", episodes)->required()->check(CLI::PositiveNumber);
  eval->add_flag("--greedy", greedy, "use distribution modes instead of sampling");
  eval->add_option("--seed", eval_seed, "evaluation seed");

  std::string runs_dir, curve_out;
  std::int64_t window = 5000;
  auto* agg = app.add_subcommand("aggregate", "mean episode length curves across seeds");
  agg->add_option("--runs", runs_dir)->required()->check(CLI::ExistingDirectory);
  agg->add_option("--out", curve_out)->required();
  agg->add_option("--window", window, "env steps per bucket")->check(CLI::PositiveNumber);

  std::string trace_out;
  auto* trace = app.add_subcommand("trace", "export one greedy episode as CSV");
  trace->add_option("--checkpoint", ckpt_path)->required()->check(CLI::ExistingFile);
  trace->add_option("--out", trace_out)->required();
  trace->add_option("--seed", eval_seed, "episode seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train) {
      const RunConfig config = parse_config(config_path);
      std::optional<std::uint64_t> only;
      if (seed >= 0) only = static_cast<std::uint64_t>(seed);
      const RunSummary s = run_experiment(config, out_dir, only);
      for (const auto& r : s.seeds) {
        std::printf("seed %llu: %d option(s), %lld env steps, %lld episodes, final-window mean %.2f%s\n",
                    static_cast<unsigned long long>(r.seed), r.options,
                    static_cast<long long>(r.env_steps), static_cast<long long>(r.episodes),
                    r.final_window_mean, r.resumed ? " (resumed)" : "");
        for (const auto& w : r.warnings) std::fprintf(stderr, "warning: seed %llu: %s\n",
                                                      static_cast<unsigned long long>(r.seed),
                                                      w.c_str());
      }
    } else if (*eval) {
      const Checkpoint ck = load_checkpoint(ckpt_path);
      const EvalReport r = evaluate(ck, env_name, episodes, greedy, eval_seed);
      std::printf("episodes      %d\n", r.episodes);
      std::printf("mean length   %.3f\n", r.mean_length);
      std::printf("min length    %d\n", r.min_length);
      std::printf("max length    %d\n", r.max_length);
      std::printf("mean return   %.4f\n", r.mean_return);
      std::printf("goal success  %.3f\n", r.success_rate);
      for (std::size_t i = 0; i < r.occupancy.size(); ++i) {
        std::printf("option %zu      %.4f\n", i + 1, r.occupancy[i]);
      }
    } else if (*agg) {
      write_curves(curve_out, aggregate_dir(runs_dir, window));
    } else if (*trace) {
      export_trace(load_checkpoint(ckpt_path), trace_out, eval_seed);
    }
  } catch (const samo::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
