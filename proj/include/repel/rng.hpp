#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace repel {

using Rng = std::mt19937_64;

// splitmix64 finalizer
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent stream for replica `index` under `master`; independent of scheduling.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index, std::uint64_t salt = 0) {
  return mix64(mix64(master ^ mix64(salt)) + index);
}

inline Rng make_rng(std::uint64_t master, std::uint64_t index, std::uint64_t salt = 0) {
  std::seed_seq seq{derive_seed(master, index, salt), derive_seed(master, index, salt + 1)};
  return Rng(seq);
}

// Uniform on the open interval (0,1).
inline double uniform01(Rng& rng) {
  for (;;) {
    double u = std::generate_canonical<double, 53>(rng);
    if (u > 0.0) return u;
  }
}

inline double exp1(Rng& rng) { return -std::log(uniform01(rng)); }

}  // namespace repel
