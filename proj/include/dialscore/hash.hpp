#pragma once

#include <cstdint>
#include <string_view>

namespace dialscore {

// FNV-1a, 64 bit. Used for feature hashing, id-based splits and fingerprints;
// stable across platforms by construction.
constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ull;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ull;

constexpr std::uint64_t fnv1a64(std::string_view data, std::uint64_t h = kFnvOffset) {
  for (char c : data) {
    h ^= static_cast<std::uint8_t>(c);
    h *= kFnvPrime;
  }
  return h;
}

// splitmix64 finalizer; a cheap bijective scrambler.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Derive a named sub-stream seed from a base seed. All pipeline randomness
// flows from one config seed through chains of derive_seed calls.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::string_view name) {
  return mix64(base ^ fnv1a64(name));
}

// Map an id to a stable fraction in [0, 1); independent of any seed so that
// hash-based splits survive re-ingestion.
inline double id_fraction(std::string_view id) {
  return static_cast<double>(fnv1a64(id) >> 11) * 0x1.0p-53;
}

}  // namespace dialscore
