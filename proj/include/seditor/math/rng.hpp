#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace seditor::math {

// Deterministic random stream. The raw engine is std::mt19937_64 (its
// sequence is pinned by the standard), but every distribution transform
// lives here because std::*_distribution state and draw order are
// implementation-defined and would break cross-build reproducibility
// and checkpoint round-trips.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Standard normal via Box-Muller. Uses the cosine branch only so each
  // draw consumes exactly two engine outputs and carries no hidden state.
  double normal();

  // Unbiased integer in [0, n). n must be positive.
  std::size_t uniform_index(std::size_t n);

  // Text round-trip of the full engine state.
  std::string save() const;
  void load(const std::string& text);

  bool operator==(const Rng& other) const { return engine_ == other.engine_; }

 private:
  std::mt19937_64 engine_;
};

// Stable sub-seed derivation so independent streams (env episodes, net
// init, rollout noise, ...) never share or overlap sequences.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream,
                          std::uint64_t index = 0);

}  // namespace seditor::math
