#pragma once

#include <cstdint>

namespace racing {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30u)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27u)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31u);
}

// Stable sub-seed derivation so independent consumers (players, races)
// never share a stream.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt_a,
                                 std::uint64_t salt_b = 0) {
  std::uint64_t s = base ^ (0x100000001b3ull * (salt_a + 1));
  splitmix64(s);
  s ^= 0xcbf29ce484222325ull * (salt_b + 1);
  splitmix64(s);
  return splitmix64(s);
}

inline std::uint64_t fnv1a64(const void* data, std::size_t size,
                             std::uint64_t seed = 0xcbf29ce484222325ull) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < size; ++i) {
    h ^= bytes[i];
    h *= 0x00000100000001b3ull;
  }
  return h;
}

}  // namespace racing
