#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace opmatch {

std::uint64_t splitmix64(std::uint64_t& state);

// FNV-1a, used to derive named sub-streams from one seed.
std::uint64_t fnv1a64(std::string_view text);

// xoshiro256** 1.0, seeded from SplitMix64. All derived draws (bounded ints,
// Bernoulli, binomial) consume outputs in a fixed documented order so streams
// are identical on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  // Independent stream for (seed, name): seeded with seed ^ fnv1a64(name).
  static Rng stream(std::uint64_t seed, std::string_view name);

  std::uint64_t next();

  // Uniform in [0, bound). Rejects raw outputs below 2^64 mod bound.
  std::uint64_t below(std::uint64_t bound);
  unsigned __int128 below128(unsigned __int128 bound);

  // Uniform in [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  // Exact Bernoulli(num / den): below(den) < num.
  bool bernoulli(std::uint64_t num, std::uint64_t den);

  // Sum of `trials` Bernoulli(num / den) draws.
  std::int64_t binomial(std::int64_t trials, std::uint64_t num, std::uint64_t den);

  const std::array<std::uint64_t, 4>& state() const noexcept { return s_; }

 private:
  std::array<std::uint64_t, 4> s_{};
};

}  // namespace opmatch
