#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace post {

// splitmix64 step; used to mix keys into statistically independent seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives a substream seed from a base seed and a list of stream keys.
// Deterministic in (base, keys) and insensitive to evaluation order, so
// parallel consumers can derive their own streams race-free.
inline std::uint64_t derive_seed(std::uint64_t base,
                                 std::initializer_list<std::uint64_t> keys) {
  std::uint64_t state = base ^ 0x6a09e667f3bcc909ULL;
  splitmix64(state);
  for (std::uint64_t k : keys) {
    state ^= k + 0x9e3779b97f4a7c15ULL + (state << 6) + (state >> 2);
    splitmix64(state);
  }
  return splitmix64(state);
}

inline std::mt19937_64 make_rng(std::uint64_t base,
                                std::initializer_list<std::uint64_t> keys) {
  return std::mt19937_64(derive_seed(base, keys));
}

// FNV-1a, used to key RNG substreams by circuit content.
inline std::uint64_t hash_string(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace post
