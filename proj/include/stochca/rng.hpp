#pragma once

// Pinned pseudo-random machinery. Every stochastic output of the library is a
// pure function of (inputs, master seed, derivation path), independent of
// thread scheduling and platform.
//
//   generator:   xoshiro256** 1.0 (Blackman & Vigna)
//   seeding:     the four state words are successive SplitMix64 outputs
//                started at the stream key
//   stream key:  k = mix(master ^ 0x6A09E667F3BCC909);
//                for each path element p: k = mix(k ^ mix(p + 0x9E3779B97F4A7C15))
//                where mix is the SplitMix64 finalizer
//   uniform:     (next() >> 11) * 2^-53, in [0, 1)

#include <array>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <vector>

namespace stochca {

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class SplitMix64 {
 public:
  constexpr explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t operator()() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix64(state_);
  }

 private:
  std::uint64_t state_;
};

class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  constexpr explicit Xoshiro256(std::uint64_t key) {
    SplitMix64 sm(key);
    for (auto& word : s_) word = sm();
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() {
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

  /// Uniform double in [0, 1) with 53 random bits.
  constexpr double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n) by multiply-shift; bias is below 2^-58 for n <= 64.
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>((*this)()) * n) >> 64);
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> s_{};
};

/// Master seed plus a derivation path (experiment id, task index, ...).
class RngSeed {
 public:
  explicit RngSeed(std::uint64_t master) : master_(master) {}
  RngSeed(std::uint64_t master, std::initializer_list<std::uint64_t> path)
      : master_(master), path_(path) {}

  std::uint64_t master() const { return master_; }
  const std::vector<std::uint64_t>& path() const { return path_; }

  RngSeed child(std::uint64_t element) const {
    RngSeed out = *this;
    out.path_.push_back(element);
    return out;
  }

  std::uint64_t key() const {
    std::uint64_t k = mix64(master_ ^ 0x6A09E667F3BCC909ULL);
    for (std::uint64_t p : path_) k = mix64(k ^ mix64(p + 0x9E3779B97F4A7C15ULL));
    return k;
  }

  Xoshiro256 engine() const { return Xoshiro256(key()); }

 private:
  std::uint64_t master_;
  std::vector<std::uint64_t> path_;
};

/// Stream tags used as the first path element by the library's experiments.
namespace streams {
inline constexpr std::uint64_t kInitialCondition = 1;
inline constexpr std::uint64_t kSimulation = 2;
inline constexpr std::uint64_t kEnsemble = 3;
inline constexpr std::uint64_t kGrid = 4;
}  // namespace streams

}  // namespace stochca
