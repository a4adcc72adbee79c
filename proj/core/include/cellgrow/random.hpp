#pragma once

#include <cstdint>
#include <random>

namespace cellgrow {

using Rng = std::mt19937_64;

/// splitmix64 finalizer.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent stream seed for (master, a, b); stable across platforms.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                    std::uint64_t b) {
  return mix_seed(mix_seed(mix_seed(master) ^ a) ^ (b * 0xd1b54a32d192ed03ULL));
}

} // namespace cellgrow
