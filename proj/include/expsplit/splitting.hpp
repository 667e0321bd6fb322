#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "expsplit/certificate.hpp"
#include "expsplit/gain_table.hpp"

namespace expsplit {

/// Default comparison tolerance in the log2 domain.
inline constexpr double kDefaultTol = 1e-9;

enum class Inequality { es1, es2, es2pp, ses1, ses2, ed1, ed2, res2 };
std::string_view to_string(Inequality tag);

/// An inequality lhs <= rhs failing at pair (m, n).
struct ViolationWitness {
  std::uint64_t m = 0, n = 0;
  Inequality tag = Inequality::es1;
  LogScalar lhs, rhs;
};

struct VerifyResult {
  bool ok = true;
  /// Some inequality depends on the interior of a gain bracket.
  bool inconclusive = false;
  std::optional<ViolationWitness> witness;  // first definite violation
  std::optional<ViolationWitness> undecided;  // first bracket-dependent comparison
  double min_slack = std::numeric_limits<double>::infinity();  // smallest rhs - lhs, log2
};

/// Checks every window inequality of the certificate's form:
/// restricted: es1 and es2 (es2pp with hB when the table is strongly invariant);
/// strong: ses1 and ses2. Throws MissingColumn when a strong certificate meets
/// a table without skew columns.
VerifyResult verify_certificate(const GainTable& table, const Certificate& cert, double tol = kDefaultTol);

/// First definite violation in window order, if any.
std::optional<ViolationWitness> find_violation(const GainTable& table, const Certificate& cert,
                                               double tol = kDefaultTol);

/// ed1: gP <= N + n c + (m - n) log2 d, ed2: -(m - n) log2 d <= N + m c + qQ.
VerifyResult verify_dichotomy(const GainTable& table, const DichotomyForm& d, double tol = kDefaultTol);

enum class FitStatus { feasible, infeasible, inconclusive };
std::string_view to_string(FitStatus s);

struct BindingConstraint {
  std::uint64_t m = 0, n = 0;
  Inequality tag = Inequality::es1;
  double weight = 0.0;  // Farkas multiplier
};

struct FitResult {
  FitStatus status = FitStatus::infeasible;
  std::optional<Certificate> cert;
  std::vector<BindingConstraint> binding;  // infeasible fits: the contradictory rows
  double infeasibility = 0.0;              // least uniform relaxation (log2) that makes the rows feasible
};

/// Lexicographic fit: least log2 N, then least log2 a, then least log2 c, then
/// greatest log2 b, subject to the notion's window inequalities, the
/// notion's structural constraints and log2 N <= log2 N_cap.
FitResult fit_certificate(const GainTable& table, Concept notion, double N_cap = 1e3, double tol = kDefaultTol);

/// res2: (m - n) log2 b + sup-gain of (A_m^n)^{-1} on Range Q_m <= N + m c.
/// Throws NotReversible.
VerifyResult verify_reversible(PairContext& ctx, const PairWindow& window, const Certificate& cert,
                               double tol = kDefaultTol);

struct ReversibleEquivalence {
  double full_norm = 0.0;   // max |HB - log2 ||(A_m^n)^{-1} Q_m|| |
  double restricted = 0.0;  // max |hB - log2 sup-gain of (A_m^n)^{-1} on Range Q_m|
  double operator_residual = 0.0;  // max ||B_m^n Q_m - (A_m^n)^{-1} Q_m|| relative
};

/// Throws NotReversible or NotStronglyInvariant.
ReversibleEquivalence reversible_es2_equiv(const SystemDef& sys, const ProjectionDef& p, const PairWindow& window,
                                           double tol = kDefaultTol);

struct InjectivityRow {
  std::uint64_t m = 0, n = 0;
  bool injective = true;
  LogScalar smallest_singular = LogScalar::infinity();
};

/// Is A_m^n injective on Ker P_n, for every window pair?
std::vector<InjectivityRow> kernel_injectivity_check(PairContext& ctx, const PairWindow& window);

}  // namespace expsplit
