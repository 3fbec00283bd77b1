#pragma once

// Reproducible randomness. The stream is SplitMix64 with doubles taken from
// the top 53 bits, so any published instance can be regenerated in another
// language from the seed alone. Randomized suites must route all draws
// through this type; nothing in the library touches global RNG state.

#include <cstdint>

#include "mgcert/matrix.hpp"

namespace mgcert {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // uniform integer in [0, n)
  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

 private:
  std::uint64_t state_;
};

// Entries uniform in [lo, hi).
DenseMatrix random_dense(Rng& rng, std::size_t rows, std::size_t cols, double lo, double hi);

// W Wt plus a ridge keeping the condition number desk friendly.
DenseMatrix random_spd_matrix(Rng& rng, std::size_t n);

// Q factor of a random square matrix.
DenseMatrix random_orthogonal(Rng& rng, std::size_t n);

// Full column rank n x nc matrix with a safe singular value spread.
DenseMatrix random_full_rank(Rng& rng, std::size_t n, std::size_t nc);

}  // namespace mgcert
