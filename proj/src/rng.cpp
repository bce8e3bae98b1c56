#include "opmatch/rng.h"

#include "opmatch/errors.h"

namespace opmatch {

namespace {

constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Rng::Rng(std::uint64_t seed) {
  std::uint64_t sm = seed;
  for (auto& word : s_) word = splitmix64(sm);
}

Rng Rng::stream(std::uint64_t seed, std::string_view name) { return Rng(seed ^ fnv1a64(name)); }

std::uint64_t Rng::next() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw ContractViolation("Rng::below(0)");
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t x = next();
    if (x >= threshold) return x % bound;
  }
}

unsigned __int128 Rng::below128(unsigned __int128 bound) {
  if (bound == 0) throw ContractViolation("Rng::below128(0)");
  if (bound <= UINT64_MAX) return below(static_cast<std::uint64_t>(bound));
  const unsigned __int128 threshold = (0 - bound) % bound;
  for (;;) {
    const unsigned __int128 hi = next();
    const unsigned __int128 x = (hi << 64) | next();
    if (x >= threshold) return x % bound;
  }
}

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw ContractViolation("uniform_int with hi < lo");
  const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(next());
  return lo + static_cast<std::int64_t>(below(span));
}

bool Rng::bernoulli(std::uint64_t num, std::uint64_t den) {
  if (num >= den) return true;
  if (num == 0) return false;
  return below(den) < num;
}

std::int64_t Rng::binomial(std::int64_t trials, std::uint64_t num, std::uint64_t den) {
  std::int64_t hits = 0;
  for (std::int64_t t = 0; t < trials; ++t) hits += bernoulli(num, den) ? 1 : 0;
  return hits;
}

}  // namespace opmatch
