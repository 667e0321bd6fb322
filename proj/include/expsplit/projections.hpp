#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "expsplit/system.hpp"

namespace expsplit {

/// Rule-based sequence n -> P_n of projectors; Q_n = I - P_n is derived.
struct ProjectionDef {
  Index dim = 0;
  RuleSpec spec;
  MatrixRule rule;
};

/// P_n = matrices[n mod matrices.size()].
ProjectionDef explicit_projection(std::vector<ScaledMatrix> matrices);

ScaledMatrix projection(const ProjectionDef& p, std::uint64_t n);
/// Q_n = I - P_n.
ScaledMatrix complement(const ProjectionDef& p, std::uint64_t n);

struct IdempotencyResult {
  bool ok = true;
  double residual = 0.0;  // max ||P_n^2 - P_n|| / ||P_n|| over the window
  std::optional<std::uint64_t> witness;
};

IdempotencyResult validate_projection(const ProjectionDef& p, const PairWindow& window, double tol,
                                      NormKind norm = NormKind::sup);

struct SharedRangeResiduals {
  double r1 = 0.0;  // P R = R
  double r2 = 0.0;  // R P = P
  double r3 = 0.0;  // Q S = Q = (I + R - P) S
  double r4 = 0.0;  // S Q = S = (I + P - R) Q
  double max() const;
};

/// Identities for two projection sequences with equal ranges and complements
/// Q = I - P, S = I - R. Throws RangeMismatch at the first n where the ranges
/// differ beyond tol.
SharedRangeResiduals shared_range_identities(const ProjectionDef& p, const ProjectionDef& r,
                                             const PairWindow& window, double tol,
                                             NormKind norm = NormKind::sup);

/// Claim ||P_n|| <= M p^n, stored as log2 M and log2 p (both >= 0).
struct ExpBoundCertificate {
  double log2_M = 0.0;
  double log2_p = 0.0;
};

struct ExpBoundCheck {
  bool ok = true;
  std::optional<std::uint64_t> witness;
  LogScalar lhs, rhs;  // at the witness
};

ExpBoundCheck exp_bound_certify(const ProjectionDef& p, const ExpBoundCertificate& cert,
                                const PairWindow& window, NormKind norm, double tol = 1e-9);

enum class Trend { bounded, exponential, superexponential };
std::string_view to_string(Trend trend);

struct ExpBoundFit {
  ExpBoundCertificate cert;
  Trend trend = Trend::bounded;
  bool within_cap = true;  // log2 M <= log2 M_cap
  double slope = 0.0;      // least-squares line through log2 ||P_n||
  double curvature = 0.0;  // quadratic coefficient of the least-squares parabola
};

/// Fits (M, p) to n -> log2 ||P_n||. When the norms stay below M_cap the fit
/// is (max ||P_n||, 1); otherwise M = max(1, ||P_0||) and p is the least rate
/// covering the window. The trend is superexponential when the curvature
/// exceeds 0.1, bounded when the slope is at most 0.05, exponential
/// otherwise. Requires window.M >= 4.
ExpBoundFit exp_bound_fit(const ProjectionDef& p, const PairWindow& window, NormKind norm,
                          double M_cap = 1e3);

}  // namespace expsplit
