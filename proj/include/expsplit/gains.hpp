#pragma once

#include <cstdint>

#include "expsplit/subspace.hpp"

namespace expsplit {

/// A gain known to lie in [lower, upper] (log2). Exact gains have lower == upper.
struct Gain {
  LogScalar lower = LogScalar::zero();
  LogScalar upper = LogScalar::zero();

  bool exact() const { return lower == upper; }
  /// Width of the bracket in log2 (0 for exact gains and for sentinels).
  double width() const;
};

struct GainOptions {
  std::uint64_t seed = 1;
  /// Monte-Carlo sampling is skipped above this subspace dimension.
  int max_sample_dim = 6;
  /// Worker threads for gain tables; 0 uses the hardware concurrency.
  unsigned threads = 0;
};

/// sup over v in S \ {0} of ||Av|| / ||v||.
///
/// dim S = 0 gives -inf (vacuous). dim S = 1 and the two norm are exact. For
/// sup/one norms with dim S >= 2 the result is a bracket: the upper end is the
/// smaller of sqrt(d) * sigma_max(AU) and the echelon-basis bound ||AV||, the
/// lower end the best of a set of explicit candidate directions.
Gain restricted_sup_gain(const ScaledMatrix& a, const Subspace& s, NormKind norm,
                         const GainOptions& options = {});

/// inf over v in S \ {0} of ||Av|| / ||v||.
///
/// dim S = 0 gives +inf (vacuous); -inf exactly when S meets Ker A numerically.
Gain restricted_inf_gain(const ScaledMatrix& a, const Subspace& s, NormKind norm,
                         const GainOptions& options = {});

}  // namespace expsplit
