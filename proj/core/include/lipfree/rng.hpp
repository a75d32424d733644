#pragma once

#include <cstdint>
#include <random>

namespace lipfree {

/// Deterministic generator used for every random choice in the library:
/// std::mt19937_64 seeded through one SplitMix64 step. Bounded draws use
/// rejection sampling on raw 64-bit output rather than the standard
/// distributions, whose algorithms differ between standard libraries.
class Rng
{
public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  /// Independent stream for a (seed, label) pair.
  static Rng stream(std::uint64_t seed, std::uint64_t label) { return Rng(splitmix64(seed) ^ splitmix64(~label)); }

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound)
  {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  /// Uniform integer in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi)
  {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  static std::uint64_t splitmix64(std::uint64_t x)
  {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

private:
  std::mt19937_64 engine_;
};

}  // namespace lipfree
