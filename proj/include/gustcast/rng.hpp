#pragma once

#include <array>
#include <cstdint>

namespace gustcast {

/// SplitMix64 finalizer (Steele, Lea, Flood 2014). Used for seeding and for
/// deriving independent child seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Combine a base seed with stream coordinates into a well-mixed child seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) noexcept;

/// xoshiro256** 1.0 (Blackman & Vigna), state seeded by four successive
/// SplitMix64 outputs starting from `seed`. All derived draws below are
/// computed with integer and IEEE-754 double arithmetic only, so a seed
/// produces the same stream on every conforming platform.
///
///   uniform()      : (next() >> 11) * 2^-53, in [0, 1)
///   normal()       : Box-Muller on two uniforms, no cached second value
///   uniform_int()  : unbiased rejection on the top bits
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept;

  std::uint64_t next() noexcept;
  double uniform() noexcept;
  double uniform(double lo, double hi) noexcept;
  /// Inclusive range [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) noexcept;
  double normal() noexcept;
  double normal(double mean, double stddev) noexcept;
  bool bernoulli(double p) noexcept { return uniform() < p; }

  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t seed_;
  std::array<std::uint64_t, 4> s_{};
};

}  // namespace gustcast
