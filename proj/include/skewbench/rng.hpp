#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace skewbench {

/// Derives a child seed from (parent, purpose, index).
///
/// The purpose string is folded with 64-bit FNV-1a, then parent, purpose hash
/// and index are combined through three rounds of the SplitMix64 finalizer
/// (constants 0x9E3779B97F4A7C15, 0xBF58476D1CE4E5B9, 0x94D049BB133111EB).
/// Only integer arithmetic is involved, so the result is identical on every
/// platform.
std::uint64_t derive_seed(std::uint64_t parent, std::string_view purpose, std::uint64_t index = 0);

/// SplitMix64 finalizer applied to `x + golden`.
std::uint64_t splitmix64(std::uint64_t& state);

/// Deterministic random stream (xoshiro256**, state filled by SplitMix64).
///
/// All variate transforms are implemented here rather than through <random>
/// distributions, whose output is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  /// Independent stream for a named sub-task.
  Rng child(std::string_view purpose, std::uint64_t index = 0) const {
    return Rng(derive_seed(seed_, purpose, index));
  }

  std::uint64_t next_u64();

  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). n must be > 0.
  std::size_t index(std::size_t n);

  /// Standard normal variate (Marsaglia polar method, no cached spare).
  double normal();

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::uint64_t seed_;
  std::uint64_t s_[4];
};

}  // namespace skewbench
