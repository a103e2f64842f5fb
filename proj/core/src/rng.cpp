#include "rmtk/rng.hpp"

#include <cmath>

namespace rmtk {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  return mix64(seed ^ mix64(tag));
}

Rng::Rng(std::uint64_t seed) {
  // splitmix64 expansion into the xoshiro256++ state; the state is never
  // all-zero because mix64 output of distinct inputs collides with 0 at most
  // once across the four words.
  std::uint64_t sm = seed;
  for (auto& word : s_) {
    sm += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = sm;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    word = z ^ (z >> 31);
  }
}

namespace {
inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
}  // namespace

std::uint64_t Rng::next_u64() {
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n <= 1) return 0;
  // Rejection above the largest multiple of n keeps the draw unbiased.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return x % n;
}

double Rng::exponential(double scale) {
  if (scale <= 0.0) return 0.0;
  // uniform01() < 1, so the log argument stays in (0, 1].
  return -scale * std::log1p(-uniform01());
}

long Rng::poisson(double mean) {
  if (mean <= 0.0) return 0;
  if (mean > 500.0) {
    // Infinite divisibility: Poisson(m) = Poisson(m/2) + Poisson(m/2).
    const double half = mean / 2.0;
    return poisson(half) + poisson(half);
  }
  const double threshold = std::exp(-mean);
  long k = 0;
  double product = uniform01();
  while (product > threshold) {
    ++k;
    product *= uniform01();
  }
  return k;
}

}  // namespace rmtk
