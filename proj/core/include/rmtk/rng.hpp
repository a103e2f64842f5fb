#pragma once

#include <cstdint>

namespace rmtk {

// Portable deterministic random numbers for the simulator.
//
// The generator is xoshiro256++ seeded through splitmix64. Streams are split
// by hashing tags into the seed rather than by jumping, so any (seed, tag...)
// chain names a reproducible substream:
//
//   replication i      -> derive_seed(master_seed, i)
//   step t of rep i    -> derive_seed(rep_seed, t)
//   family f at step t -> derive_seed(step_seed, f)
//
// The shuffle that interleaves family arrivals within a step draws from
// derive_seed(step_seed, kShuffleTag) so adding families never perturbs it.
//
// Everything below is integer arithmetic plus IEEE-754 double ops, so a given
// seed reproduces the same draws on any conforming platform.

inline constexpr std::uint64_t kShuffleTag = 0x9e3779b97f4a7c15ULL;

// splitmix64 finalizer; also used as the tag-mixing hash.
std::uint64_t mix64(std::uint64_t x);

// Derive the seed of a child substream from a parent seed and a tag.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag);

class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform on [0, 1) with 53 random bits.
  double uniform01();

  // Uniform integer in [0, n); n must be >= 1. Unbiased (rejection).
  std::uint64_t below(std::uint64_t n);

  // Exponential with the given scale (mean). scale <= 0 returns 0.
  double exponential(double scale);

  // Poisson with the given mean. mean <= 0 returns 0. Exact (Knuth product
  // method); large means are split recursively to avoid exp() underflow.
  long poisson(double mean);

 private:
  std::uint64_t s_[4];
};

}  // namespace rmtk
