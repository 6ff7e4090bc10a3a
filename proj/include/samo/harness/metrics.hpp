#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "samo/trainer.hpp"

namespace samo::harness {

struct MetricsRow {
  std::string run_id;
  std::uint64_t seed = 0;
  std::int64_t env_step = 0;
  std::int64_t episode = 0;
  int episode_length = 0;
  double ret = 0.0;
  double alpha = 0.0;
  std::vector<std::int64_t> option_hist;
  int option_count = 0;
  std::string event = "none";
};

const std::string& metrics_header();
std::string format_row(const MetricsRow& row);
MetricsRow parse_row(const std::string& line);
MetricsRow to_row(const EpisodeRecord& rec, const std::string& run_id, std::uint64_t seed);

std::vector<MetricsRow> read_metrics(const std::string& path);

// Appends rows and flushes after each one.
class MetricsWriter {
 public:
  // Starts a fresh file, or keeps the first `keep_rows` rows of an existing
  // one when resuming.
  MetricsWriter(const std::string& path, std::int64_t keep_rows = -1);
  void write(const MetricsRow& row);

 private:
  std::ofstream out_;
};

struct CurvePoint {
  std::int64_t bucket_start = 0;
  double mean_length = 0.0;
  double half_std = 0.0;
  int seeds = 0;
};

// Buckets each seed's episodes by env_step / window, averages within the
// bucket, then reports the mean over seeds and half the sample standard
// deviation across seeds. Buckets no seed reached are omitted.
std::vector<CurvePoint> aggregate_curves(const std::vector<std::vector<MetricsRow>>& runs,
                                         std::int64_t window);
std::vector<CurvePoint> aggregate_dir(const std::string& run_dir, std::int64_t window);
void write_curves(const std::string& path, const std::vector<CurvePoint>& curve);

// Mean episode length over episodes ending in the last `fraction` of the
// step budget.
double final_window_mean(const std::vector<MetricsRow>& rows, std::int64_t total_steps,
                         double fraction = 0.1);

}  // namespace samo::harness
