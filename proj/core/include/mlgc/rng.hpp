#pragma once

#include <cstdint>

namespace mlgc {

// splitmix64 finalizer.  Used to derive independent, reproducible seed
// streams from one master seed so that e.g. the label shuffle and each
// synthetic layer consume decorrelated randomness.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Deterministic sub-seed for stream `stream` of master seed `seed`.
// Different streams of the same seed, and the same stream of different
// seeds, both give unrelated values.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream));
}

}  // namespace mlgc
