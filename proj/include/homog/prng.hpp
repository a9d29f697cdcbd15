#pragma once

#include <cstdint>

namespace homog {

/// Deterministic 64-bit PRNG (splitmix64 mixing). Every sampled check in the
/// library draws from one of these, seeded explicitly, so reports are
/// reproducible bit for bit.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n); n must be nonzero.
  std::uint64_t below(std::uint64_t n) { return next() % n; }

  // Derive an independent stream for a sub-task.
  SplitMix64 fork(std::uint64_t salt) { return SplitMix64(next() ^ (salt * 0x9e3779b97f4a7c15ULL)); }

 private:
  std::uint64_t state_;
};

}  // namespace homog
