#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace lapreg {

// All randomness in the library flows through this engine type. Callers own
// the stream; functions only advance it.
using Rng = std::mt19937_64;

// SplitMix64 finalizer.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives an independent stream seed from a base seed and a tuple of
// coordinates (cell values, replicate index, attempt, ...). The mapping is a
// pure function of its arguments, so the stream a replicate sees does not
// depend on scheduling.
inline std::uint64_t derive_seed(std::uint64_t base,
                                 std::initializer_list<std::uint64_t> coords) {
  std::uint64_t h = mix64(base);
  for (std::uint64_t c : coords) h = mix64(h ^ mix64(c));
  return h;
}

inline Rng make_rng(std::uint64_t base,
                    std::initializer_list<std::uint64_t> coords) {
  return Rng(derive_seed(base, coords));
}

}  // namespace lapreg
