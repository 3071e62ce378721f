#pragma once

#include <cstdint>
#include <string_view>

#include "dialscore/hash.hpp"

namespace dialscore {

// Deterministic PRNG (splitmix64). std::mt19937 with std distributions is not
// bit-stable across standard libraries, so bounded draws are implemented here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform draw from [0, bound) via rejection sampling; bound > 0.
  std::uint64_t uniform(std::uint64_t bound) {
    const std::uint64_t threshold = -bound % bound;  // 2^64 mod bound
    for (;;) {
      std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform(n)); }

  // Uniform double in [0, 1) with 53 random bits.
  double real() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return real() < p; }

  // Independent child stream; does not advance this stream.
  Rng fork(std::string_view name) const { return Rng(derive_seed(state_, name)); }

  template <typename T>
  void shuffle(T& seq) {
    for (std::size_t i = seq.size(); i > 1; --i) {
      std::size_t j = index(i);
      using std::swap;
      swap(seq[i - 1], seq[j]);
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace dialscore
