#pragma once

#include <cstdint>

namespace flagdec {

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Counter-based stream: the draw for (seed, shot, slot) never depends on evaluation order.
inline uint64_t keyed_u64(uint64_t seed, uint64_t shot, uint64_t slot) {
  uint64_t h = splitmix64(seed ^ 0x6a09e667f3bcc909ULL);
  h = splitmix64(h ^ shot);
  return splitmix64(h ^ (slot * 0xd1b54a32d192ed03ULL));
}

inline double to_unit(uint64_t u) { return static_cast<double>(u >> 11) * 0x1.0p-53; }

// Derives an independent seed for a named sub-stream.
inline uint64_t derive_seed(uint64_t seed, uint64_t tag) { return splitmix64(splitmix64(seed) ^ tag); }

}  // namespace flagdec
