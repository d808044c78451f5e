#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>

namespace rankmatch {

#ifdef RANKMATCH_VERSION
inline constexpr const char* kVersion = RANKMATCH_VERSION;
#else
inline constexpr const char* kVersion = "0.0.0";
#endif

// Finite stand-in for log(0). Every achievable log-likelihood in a binned
// model is far above this, and exp(kLogFloor) is still a normal double.
inline constexpr double kLogFloor = -700.0;

// Ranks are 1-based; rank N is the largest score of a cohort of N.
using Rank = int;

inline double floor_log(double x) {
  if (!(x > 0.0)) return kLogFloor;
  const double v = std::log(x);
  return v < kLogFloor ? kLogFloor : v;
}

// SplitMix64 finalizer; used to derive independent RNG streams.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Seed for sub-stream `index` of `master`. Stable across platforms and
// independent of how work is scheduled.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return mix_seed(mix_seed(master) ^ mix_seed(index + 0x632BE59BD9B4E019ULL));
}

// log(exp(a) + exp(b)) with -inf handled.
inline double log_add_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  return a > b ? a + std::log1p(std::exp(b - a)) : b + std::log1p(std::exp(a - b));
}

}  // namespace rankmatch
