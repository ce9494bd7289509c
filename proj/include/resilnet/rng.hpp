#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace resilnet {

/// SplitMix64 finalizer; used to spread structured seeds over 64 bits.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Folds a sequence of tags into a seed. Different tag sequences give
/// unrelated seeds; the same sequence always gives the same one.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags) {
  std::uint64_t h = mix64(base);
  for (std::uint64_t t : tags) h = mix64(h ^ mix64(t + 0x632be59bd9b4e019ULL));
  return h;
}

/// xoshiro256** generator. Satisfies UniformRandomBitGenerator so it can be
/// handed to <random> distributions, and is cheap to construct, which
/// matters because every replication gets its own.
class Stream {
 public:
  using result_type = std::uint64_t;

  explicit Stream(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& word : s_) {
      x += 0x9e3779b97f4a7c15ULL;
      std::uint64_t z = x;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
      word = z ^ (z >> 31);
    }
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
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

  /// Uniform in [0,1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound) by multiply-shift (bias < 2^-32 for the
  /// bounds used here).
  std::uint64_t below(std::uint64_t bound) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>((*this)()) * bound) >> 64);
  }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t s_[4];
};

/// A master seed plus a replication index. Every (master, index) pair maps
/// to its own stream, so replication i draws the same numbers no matter
/// which worker runs it or in what order.
struct RunSeed {
  std::uint64_t master = 0;
  std::uint64_t index = 0;

  Stream stream() const { return Stream(derive_seed(master, {index})); }
  /// Seed for a sub-task, e.g. one configuration or one ensemble member.
  RunSeed child(std::uint64_t tag) const { return {derive_seed(master, {index, tag}), 0}; }
  RunSeed at(std::uint64_t i) const { return {master, i}; }
};

}  // namespace resilnet
