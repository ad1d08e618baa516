#pragma once

#include <cstdint>
#include <random>

namespace swarm {

/// Seedable random stream used by every stochastic component.
///
/// Wraps std::mt19937_64, whose output sequence is fixed by the standard.
/// The real-valued draws are derived from raw 64-bit outputs here rather than
/// through std::uniform_real_distribution / std::normal_distribution, whose
/// algorithms differ between standard libraries. That keeps trajectories
/// identical across toolchains, not just across runs.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  // Standard normal via Box-Muller; consumes two uniforms per call.
  double normal();

  // Independent child stream, for per-world or per-cell RNGs.
  Rng split() { return Rng(engine_() ^ 0x9e3779b97f4a7c15ULL); }

  bool operator==(const Rng& o) const { return engine_ == o.engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace swarm
