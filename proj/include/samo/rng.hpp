#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace samo {

using Rng = std::mt19937_64;

// Independent streams per concern, all derived from the run seed.
enum class Stream : std::uint64_t {
  kEnv = 1,
  kPolicy = 2,
  kReplay = 3,
  kInit = 4,
  kRollout = 5,
};

inline Rng make_rng(std::uint64_t seed, Stream stream, std::uint64_t salt = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(salt),
                    static_cast<std::uint32_t>(salt >> 32)};
  return Rng(seq);
}

inline double uniform01(Rng& rng) {
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  return u < 1.0 ? u : 0x1.fffffffffffffp-1;
}

inline double standard_normal(Rng& rng) {
  return std::normal_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace samo
