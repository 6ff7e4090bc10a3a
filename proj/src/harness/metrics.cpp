#include "samo/harness/metrics.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <regex>
#include <sstream>

#include "samo/errors.hpp"

namespace samo::harness {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss(s);
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

const std::string& metrics_header() {
  static const std::string h =
      "run_id,seed,env_step,episode,episode_length,return,alpha,option_hist,option_count,event";
  return h;
}

std::string format_row(const MetricsRow& r) {
  std::string hist;
  for (std::size_t i = 0; i < r.option_hist.size(); ++i) {
    if (i) hist += ';';
    hist += std::to_string(r.option_hist[i]);
  }
  std::ostringstream o;
  o << r.run_id << ',' << r.seed << ',' << r.env_step << ',' << r.episode << ','
    << r.episode_length << ',' << fmt(r.ret) << ',' << fmt(r.alpha) << ',' << hist << ','
    << r.option_count << ',' << r.event;
  return o.str();
}

MetricsRow parse_row(const std::string& line) {
  const auto f = split(line, ',');
  if (f.size() != 10) throw FormatError("metrics row has " + std::to_string(f.size()) + " fields");
  MetricsRow r;
  try {
    r.run_id = f[0];
    r.seed = std::stoull(f[1]);
    r.env_step = std::stoll(f[2]);
    r.episode = std::stoll(f[3]);
    r.episode_length = std::stoi(f[4]);
    r.ret = std::stod(f[5]);
    r.alpha = std::stod(f[6]);
    for (const auto& h : split(f[7], ';')) r.option_hist.push_back(std::stoll(h));
    r.option_count = std::stoi(f[8]);
    r.event = f[9];
  } catch (const std::logic_error&) {
    throw FormatError("malformed metrics row: " + line);
  }
  return r;
}

MetricsRow to_row(const EpisodeRecord& rec, const std::string& run_id, std::uint64_t seed) {
  MetricsRow r;
  r.run_id = run_id;
  r.seed = seed;
  r.env_step = rec.env_step;
  r.episode = rec.episode;
  r.episode_length = rec.length;
  r.ret = rec.ret;
  r.alpha = rec.alpha;
  r.option_hist = rec.option_hist;
  r.option_count = rec.option_count;
  if (!rec.events.empty()) {
    r.event.clear();
    for (std::size_t i = 0; i < rec.events.size(); ++i) {
      if (i) r.event += '|';
      r.event += rec.events[i];
    }
  }
  return r;
}

std::vector<MetricsRow> read_metrics(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot read metrics file '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line != metrics_header()) {
    throw FormatError(path + ": unexpected metrics header");
  }
  std::vector<MetricsRow> rows;
  while (std::getline(in, line)) {
    if (!line.empty()) rows.push_back(parse_row(line));
  }
  return rows;
}

MetricsWriter::MetricsWriter(const std::string& path, std::int64_t keep_rows) {
  std::vector<std::string> kept;
  if (keep_rows >= 0 && std::filesystem::exists(path)) {
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    while (static_cast<std::int64_t>(kept.size()) < keep_rows && std::getline(in, line)) {
      kept.push_back(line);
    }
  }
  out_.open(path, std::ios::trunc);
  if (!out_) throw UsageError("cannot write metrics file '" + path + "'");
  out_ << metrics_header() << '\n';
  for (const auto& l : kept) out_ << l << '\n';
  out_.flush();
}

void MetricsWriter::write(const MetricsRow& row) {
  out_ << format_row(row) << '\n';
  out_.flush();
}

std::vector<CurvePoint> aggregate_curves(const std::vector<std::vector<MetricsRow>>& runs,
                                         std::int64_t window) {
  if (window < 1) throw ConfigError("window must be >= 1");
  // bucket -> per-seed mean episode length
  std::map<std::int64_t, std::vector<double>> buckets;
  for (const auto& rows : runs) {
    std::map<std::int64_t, std::pair<double, int>> acc;
    for (const auto& r : rows) {
      auto& a = acc[r.env_step / window];
      a.first += r.episode_length;
      ++a.second;
    }
    for (const auto& [b, a] : acc) buckets[b].push_back(a.first / a.second);
  }
  std::vector<CurvePoint> out;
  for (const auto& [b, values] : buckets) {
    CurvePoint p;
    p.bucket_start = b * window;
    p.seeds = static_cast<int>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double var = 0.0;
    if (values.size() > 1) {
      for (double v : values) var += (v - mean) * (v - mean);
      var /= static_cast<double>(values.size() - 1);
    }
    p.mean_length = mean;
    p.half_std = 0.5 * std::sqrt(var);
    out.push_back(p);
  }
  return out;
}

std::vector<CurvePoint> aggregate_dir(const std::string& run_dir, std::int64_t window) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(run_dir)) throw UsageError("'" + run_dir + "' is not a directory");
  static const std::regex name(R"(metrics_seed\d+\.csv)");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(run_dir)) {
    if (e.is_regular_file() && std::regex_match(e.path().filename().string(), name)) {
      files.push_back(e.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<std::vector<MetricsRow>> runs;
  for (const auto& f : files) runs.push_back(read_metrics(f.string()));
  return aggregate_curves(runs, window);
}

void write_curves(const std::string& path, const std::vector<CurvePoint>& curve) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << "env_step,mean_length,half_std,seeds\n";
  for (const auto& p : curve) {
    out << p.bucket_start << ',' << fmt(p.mean_length) << ',' << fmt(p.half_std) << ','
        << p.seeds << '\n';
  }
}

double final_window_mean(const std::vector<MetricsRow>& rows, std::int64_t total_steps,
                         double fraction) {
  const double start = static_cast<double>(total_steps) * (1.0 - fraction);
  double sum = 0.0;
  int n = 0;
  for (const auto& r : rows) {
    if (static_cast<double>(r.env_step) > start && r.env_step <= total_steps) {
      sum += r.episode_length;
      ++n;
    }
  }
  return n ? sum / n : 0.0;
}

}  // namespace samo::harness
