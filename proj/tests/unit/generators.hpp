#pragma once

#include <cstdint>
#include <random>

#include "expsplit/projections.hpp"

namespace gen {

using expsplit::Index;
using expsplit::Mat;

/// Deterministic source for property tests; every case is reproducible from
/// (suite seed, case index).
class Gen {
 public:
  Gen(std::uint64_t seed, std::uint64_t index) : rng_(seed * 0x9E3779B97F4A7C15ULL + index) {}

  std::mt19937_64& rng() { return rng_; }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  /// Gaussian entries scaled by 2^e, e uniform in [-spread, spread].
  Mat matrix(Index dim, int spread = 0);
  /// Condition number <= 16.
  Mat invertible(Index dim);
  /// S diag(1,..,1,0,..,0) S^{-1} with S invertible.
  Mat projector(Index dim, Index rank);
  /// Random columns spanning a subspace of the given dimension.
  Mat basis(Index dim, Index k);

 private:
  std::mt19937_64 rng_;
};

/// Runs `body(g, i)` for `cases` independent cases.
template <typename F>
void for_all(std::uint64_t seed, int cases, F&& body) {
  for (int i = 0; i < cases; ++i) {
    Gen g(seed, static_cast<std::uint64_t>(i));
    body(g, i);
  }
}

}  // namespace gen
