#include "samo/harness/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "samo/errors.hpp"

namespace samo::harness {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <typename T>
std::string join(const std::vector<T>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(xs[i]);
  }
  return out;
}

class Reader {
 public:
  explicit Reader(std::map<std::string, std::string> kv) : kv_(std::move(kv)) {}

  bool has(const std::string& key) const { return kv_.count(key) != 0; }
  const std::string& raw(const std::string& key) const { return kv_.at(key); }

  double real(const std::string& key) const {
    const std::string& v = raw(key);
    try {
      std::size_t used = 0;
      const double d = std::stod(v, &used);
      if (used == v.size()) return d;
    } catch (const std::exception&) {
    }
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }

  std::int64_t integer(const std::string& key) const {
    const std::string& v = raw(key);
    std::int64_t out = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size()) {
      throw ConfigError(key + ": expected an integer, got '" + v + "'");
    }
    return out;
  }

  bool boolean(const std::string& key) const {
    const std::string& v = raw(key);
    if (v == "on" || v == "true" || v == "1") return true;
    if (v == "off" || v == "false" || v == "0") return false;
    throw ConfigError(key + ": expected on/off, got '" + v + "'");
  }

  std::vector<std::int64_t> integers(const std::string& key) const {
    std::vector<std::int64_t> out;
    std::stringstream ss(raw(key));
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      std::int64_t x = 0;
      const auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), x);
      if (item.empty() || ec != std::errc() || p != item.data() + item.size()) {
        throw ConfigError(key + ": expected a comma-separated integer list, got '" + raw(key) +
                          "'");
      }
      out.push_back(x);
    }
    if (out.empty()) throw ConfigError(key + ": list is empty");
    return out;
  }

 private:
  std::map<std::string, std::string> kv_;
};

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError(key + ": " + what);
}

std::vector<int> layer_list(const Reader& r, const std::string& key) {
  std::vector<int> out;
  for (auto x : r.integers(key)) {
    require(x >= 1 && x <= 4096, key, "layer widths must be in [1, 4096]");
    out.push_back(static_cast<int>(x));
  }
  return out;
}

}  // namespace

const std::vector<std::string>& required_keys() {
  static const std::vector<std::string> keys = {
      "env.name",       "env.max_steps",     "env.k_frames",     "sac.lr",
      "sac.gamma",      "sac.tau",           "sac.batch",        "sac.buffer",
      "samo.alpha_min", "samo.gamma_beta",   "samo.max_options", "samo.t_min",
      "samo.shaping",   "samo.step_budget",  "run.seeds",        "run.total_steps"};
  return keys;
}

const std::vector<std::string>& optional_keys() {
  static const std::vector<std::string> keys = {
      "env.map",         "sac.hidden",         "sac.warmup",     "samo.bce_first",
      "samo.bce_epochs", "samo.bce_batch",     "samo.value_stop", "samo.continue_last",
      "samo.beta_hidden", "samo.t_min_training", "run.id"};
  return keys;
}

void validate(const RunConfig& c) {
  require(std::find(envs::env_names().begin(), envs::env_names().end(), c.env_name) !=
              envs::env_names().end(),
          "env.name", "unknown environment '" + c.env_name + "'");
  require(c.env.max_steps >= 1, "env.max_steps", "must be >= 1");
  require(c.env.k_frames >= 1, "env.k_frames", "must be >= 1");
  require(c.sac.lr > 0.0, "sac.lr", "must be > 0");
  require(c.sac.gamma > 0.0 && c.sac.gamma <= 1.0, "sac.gamma", "must be in (0, 1]");
  require(c.sac.tau > 0.0 && c.sac.tau <= 1.0, "sac.tau", "must be in (0, 1]");
  require(c.sac.batch >= 1, "sac.batch", "must be >= 1");
  require(c.buffer >= static_cast<std::size_t>(c.sac.batch), "sac.buffer",
          "must hold at least one batch");
  require(c.samo.alpha_min > 0.0 && c.samo.alpha_min < 1.0, "samo.alpha_min", "must be in (0, 1)");
  require(c.samo.gamma_beta > 0.0 && c.samo.gamma_beta <= 1.0, "samo.gamma_beta",
          "must be in (0, 1]");
  require(c.samo.max_options >= 1, "samo.max_options", "must be >= 1");
  require(c.samo.t_min >= 1, "samo.t_min", "must be >= 1");
  require(c.samo.step_budget >= 1, "samo.step_budget", "must be >= 1");
  require(c.samo.warmup >= 0, "sac.warmup", "must be >= 0");
  require(c.samo.bce_epochs >= 0, "samo.bce_epochs", "must be >= 0");
  require(c.samo.bce_batch >= 2, "samo.bce_batch", "must be >= 2");
  require(c.samo.value_stop >= 0.0, "samo.value_stop", "must be >= 0");
  require(!c.seeds.empty(), "run.seeds", "must list at least one seed");
  require(c.total_steps >= 1, "run.total_steps", "must be >= 1");
  require(!c.run_id.empty() && c.run_id.find_first_of(", \t") == std::string::npos, "run.id",
          "must be non-empty without commas or spaces");
}

RunConfig parse_config_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto& req = required_keys();
    const auto& opt = optional_keys();
    if (std::find(req.begin(), req.end(), key) == req.end() &&
        std::find(opt.begin(), opt.end(), key) == opt.end()) {
      throw ConfigError(key + ": unknown configuration key");
    }
    if (kv.count(key)) throw ConfigError(key + ": set more than once");
    if (value.empty()) throw ConfigError(key + ": missing value");
    kv[key] = value;
  }
  for (const auto& key : required_keys()) {
    if (!kv.count(key)) throw ConfigError(key + ": required key is missing");
  }

  const Reader r(std::move(kv));
  RunConfig c;
  c.env_name = r.raw("env.name");
  try {
    c.env = envs::default_params(c.env_name);
  } catch (const ConfigError&) {
    throw ConfigError("env.name: unknown environment '" + c.env_name + "'");
  }
  c.env.max_steps = static_cast<int>(r.integer("env.max_steps"));
  c.env.k_frames = static_cast<int>(r.integer("env.k_frames"));
  if (r.has("env.map")) c.env.map_path = r.raw("env.map");

  c.sac.lr = r.real("sac.lr");
  c.sac.gamma = r.real("sac.gamma");
  c.sac.tau = r.real("sac.tau");
  c.sac.batch = static_cast<int>(r.integer("sac.batch"));
  const auto buffer = r.integer("sac.buffer");
  require(buffer >= 1, "sac.buffer", "must be >= 1");
  c.buffer = static_cast<std::size_t>(buffer);
  if (r.has("sac.hidden")) c.sac.hidden = layer_list(r, "sac.hidden");
  if (r.has("sac.warmup")) c.samo.warmup = static_cast<int>(r.integer("sac.warmup"));

  c.samo.alpha_min = r.real("samo.alpha_min");
  c.samo.gamma_beta = r.real("samo.gamma_beta");
  c.samo.max_options = static_cast<int>(r.integer("samo.max_options"));
  c.samo.t_min = static_cast<int>(r.integer("samo.t_min"));
  c.samo.shaping = r.boolean("samo.shaping");
  c.samo.step_budget = r.integer("samo.step_budget");
  if (r.has("samo.bce_first")) c.samo.bce_first = r.boolean("samo.bce_first");
  if (r.has("samo.bce_epochs")) c.samo.bce_epochs = static_cast<int>(r.integer("samo.bce_epochs"));
  if (r.has("samo.bce_batch")) c.samo.bce_batch = static_cast<int>(r.integer("samo.bce_batch"));
  if (r.has("samo.value_stop")) c.samo.value_stop = r.real("samo.value_stop");
  if (r.has("samo.continue_last")) c.samo.continue_last = r.boolean("samo.continue_last");
  if (r.has("samo.t_min_training")) c.samo.t_min_training = r.boolean("samo.t_min_training");
  if (r.has("samo.beta_hidden")) c.samo.beta_hidden = layer_list(r, "samo.beta_hidden");

  c.seeds.clear();
  for (auto s : r.integers("run.seeds")) {
    require(s >= 0, "run.seeds", "seeds must be non-negative");
    c.seeds.push_back(static_cast<std::uint64_t>(s));
  }
  c.total_steps = r.integer("run.total_steps");
  if (r.has("run.id")) c.run_id = r.raw("run.id");

  validate(c);
  return c;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream o;
  auto line = [&](const std::string& k, const std::string& v) { o << k << " = " << v << "\n"; };
  line("env.name", c.env_name);
  line("env.max_steps", std::to_string(c.env.max_steps));
  line("env.k_frames", std::to_string(c.env.k_frames));
  if (!c.env.map_path.empty()) line("env.map", c.env.map_path);
  line("sac.lr", fmt_double(c.sac.lr));
  line("sac.gamma", fmt_double(c.sac.gamma));
  line("sac.tau", fmt_double(c.sac.tau));
  line("sac.batch", std::to_string(c.sac.batch));
  line("sac.buffer", std::to_string(c.buffer));
  line("sac.hidden", join(c.sac.hidden));
  line("sac.warmup", std::to_string(c.samo.warmup));
  line("samo.alpha_min", fmt_double(c.samo.alpha_min));
  line("samo.gamma_beta", fmt_double(c.samo.gamma_beta));
  line("samo.max_options", std::to_string(c.samo.max_options));
  line("samo.t_min", std::to_string(c.samo.t_min));
  line("samo.shaping", c.samo.shaping ? "on" : "off");
  line("samo.step_budget", std::to_string(c.samo.step_budget));
  line("samo.bce_first", c.samo.bce_first ? "on" : "off");
  line("samo.bce_epochs", std::to_string(c.samo.bce_epochs));
  line("samo.bce_batch", std::to_string(c.samo.bce_batch));
  line("samo.value_stop", fmt_double(c.samo.value_stop));
  line("samo.continue_last", c.samo.continue_last ? "on" : "off");
  line("samo.t_min_training", c.samo.t_min_training ? "on" : "off");
  line("samo.beta_hidden", join(c.samo.beta_hidden));
  line("run.seeds", join(c.seeds));
  line("run.total_steps", std::to_string(c.total_steps));
  line("run.id", c.run_id);
  return o.str();
}

}  // namespace samo::harness
