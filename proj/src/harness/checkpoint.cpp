#include "samo/harness/checkpoint.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>

#include "samo/errors.hpp"
#include "samo/nn/serialize.hpp"

namespace samo::harness {

namespace {

constexpr char kMagic[5] = {'S', 'A', 'M', 'O', '1'};

void write_string(std::ostream& out, const std::string& s) {
  nn::write_u32(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string read_string(std::istream& in) {
  const auto n = nn::read_u32(in);
  if (n > (1u << 20)) throw FormatError("checkpoint string too long");
  std::string s(n, '\0');
  in.read(s.data(), n);
  if (!in) throw FormatError("truncated checkpoint");
  return s;
}

}  // namespace

void save_checkpoint(const std::string& path, const Checkpoint& c) {
  // Write beside the target and rename, so a crash never leaves half a file.
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw UsageError("cannot write checkpoint '" + path + "'");
    const auto& set = c.options;
    out.write(kMagic, sizeof kMagic);
    nn::write_u32(out, static_cast<std::uint32_t>(set.size()));
    for (int i = 1; i <= set.size(); ++i) {
      nn::write_net(out, policy::head_net(set.option(i).head));
      nn::write_net(out, set.termination(i).net());
    }
    write_string(out, c.env_name);
    write_string(out, c.env.map_path);
    nn::write_u32(out, static_cast<std::uint32_t>(c.env.max_steps));
    nn::write_u32(out, static_cast<std::uint32_t>(c.env.k_frames));
    nn::write_u32(out, set.action_space().continuous() ? 0u : 1u);
    nn::write_u32(out, static_cast<std::uint32_t>(set.action_space().size));
    nn::write_u32(out, static_cast<std::uint32_t>(set.obs_dim()));
    nn::write_f64(out, set.gamma_beta());
    nn::write_f64(out, set.empty() ? options::kDefaultThreshold : set.termination(1).threshold());
    nn::write_u32(out, static_cast<std::uint32_t>(c.t_min));
    for (int i = 1; i <= set.size(); ++i) {
      nn::write_f64(out, set.option(i).alpha);
      nn::write_u32(out, set.option(i).mature ? 1u : 0u);
    }
    nn::write_u64(out, static_cast<std::uint64_t>(c.progress.env_step));
    nn::write_u64(out, static_cast<std::uint64_t>(c.progress.episode));
    if (!out) throw UsageError("failed writing checkpoint '" + path + "'");
  }
  std::filesystem::rename(tmp, path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open checkpoint '" + path + "'");
  char magic[5] = {};
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
    throw FormatError("'" + path + "' is not a checkpoint (bad magic)");
  }
  const auto count = nn::read_u32(in);
  if (count > 1024) throw FormatError("implausible option count in checkpoint");
  std::vector<nn::DenseNet> policies, betas;
  for (std::uint32_t i = 0; i < count; ++i) {
    policies.push_back(nn::read_net(in));
    betas.push_back(nn::read_net(in));
  }
  Checkpoint c;
  c.env_name = read_string(in);
  try {
    c.env = envs::default_params(c.env_name);
  } catch (const ConfigError&) {
    throw FormatError("checkpoint names unknown environment '" + c.env_name + "'");
  }
  c.env.map_path = read_string(in);
  c.env.max_steps = static_cast<int>(nn::read_u32(in));
  c.env.k_frames = static_cast<int>(nn::read_u32(in));
  const auto kind = nn::read_u32(in);
  const auto size = static_cast<int>(nn::read_u32(in));
  const auto obs_dim = static_cast<int>(nn::read_u32(in));
  if (kind > 1 || size < 1) throw FormatError("bad action space in checkpoint");
  const ActionSpace space = kind == 0 ? ActionSpace::continuous_box(size) : ActionSpace::discrete(size);
  const double gamma_beta = nn::read_f64(in);
  const double threshold = nn::read_f64(in);
  c.t_min = static_cast<int>(nn::read_u32(in));
  options::OptionSet set(space, obs_dim, gamma_beta);
  for (std::uint32_t i = 0; i < count; ++i) {
    options::Option opt{space.continuous() ? policy::PolicyHead(policy::GaussianHead(policies[i]))
                                           : policy::PolicyHead(policy::CategoricalHead(policies[i])),
                        nn::read_f64(in), nn::read_u32(in) != 0};
    if (policies[i].input_size() != static_cast<std::size_t>(obs_dim)) {
      throw FormatError("policy fragment does not match the observation size");
    }
    set.append(std::move(opt),
               options::TerminationFn(space, betas[i], static_cast<int>(i) + 1, threshold));
  }
  c.progress.env_step = static_cast<std::int64_t>(nn::read_u64(in));
  c.progress.episode = static_cast<std::int64_t>(nn::read_u64(in));
  c.options = std::move(set);
  return c;
}

}  // namespace samo::harness
