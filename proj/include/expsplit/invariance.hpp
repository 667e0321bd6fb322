#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string_view>

#include "expsplit/projections.hpp"
#include "expsplit/subspace.hpp"

namespace expsplit {

/// P_n, Q_n and their ranges, computed once per index.
struct ProjectorData {
  ScaledMatrix p, q;
  Subspace range, kernel;  // Range P_n, Ker P_n = Range Q_n
};

ProjectorData projector_data(const ProjectionDef& p, std::uint64_t n, double rank_tol = kDefaultRankTol);

/// Thread-safe memo of projector data and evolution operators for one
/// (system, projection) pair.
class PairContext {
 public:
  PairContext(const SystemDef& sys, const ProjectionDef& p, double rank_tol = kDefaultRankTol)
      : sys_(&sys), p_(&p), rank_tol_(rank_tol), evolution_(sys) {}

  const SystemDef& system() const { return *sys_; }
  const ProjectionDef& projection() const { return *p_; }
  double rank_tol() const { return rank_tol_; }

  const ProjectorData& at(std::uint64_t n);
  ScaledMatrix evolution(std::uint64_t m, std::uint64_t n) { return evolution_.get(m, n); }

 private:
  const SystemDef* sys_;
  const ProjectionDef* p_;
  double rank_tol_;
  EvolutionCache evolution_;
  std::mutex mutex_;
  std::map<std::uint64_t, ProjectorData> data_;
};

struct InvarianceResult {
  bool ok = true;
  double residual = 0.0;  // max relative distance of A_n Range P_n from Range P_{n+1}, same for kernels
  std::optional<std::uint64_t> witness;
};

/// One-step invariance A_n P_n = P_{n+1} A_n for n < window.M, checked as
/// A_n Range P_n in Range P_{n+1} and A_n Ker P_n in Ker P_{n+1}. The
/// subspace form stays accurate when one part of A_n dwarfs the other.
InvarianceResult invariance_check(const SystemDef& sys, const ProjectionDef& p, const PairWindow& window,
                                  double tol);

enum class IsoVerdict { iso, not_injective, not_surjective, dim_mismatch, containment_violation, inconclusive };
std::string_view to_string(IsoVerdict verdict);

struct IsoReport {
  std::uint64_t m = 0, n = 0;
  Index dim_ker_n = 0, dim_ker_m = 0;
  double containment_residual = 0.0;
  Index rank = 0;
  LogScalar smallest_singular = LogScalar::zero();
  LogScalar largest_singular = LogScalar::zero();
  IsoVerdict verdict = IsoVerdict::iso;

  bool is_iso() const { return verdict == IsoVerdict::iso; }
};

/// Is A_m^n : Ker P_n -> Ker P_m an isomorphism?
IsoReport strong_invariance_check(PairContext& ctx, std::uint64_t m, std::uint64_t n, double tol);
IsoReport strong_invariance_check(const SystemDef& sys, const ProjectionDef& p, std::uint64_t m,
                                  std::uint64_t n, double tol);

/// First non-iso pair of the window in scan order, if any.
std::optional<IsoReport> first_strong_invariance_failure(PairContext& ctx, const PairWindow& window, double tol);

/// B_m^n Q_m: the inverse of A_m^n on the kernels, composed with Q_m so it is
/// defined on all of R^d. Throws NotStronglyInvariant.
ScaledMatrix skew_evolution(PairContext& ctx, std::uint64_t m, std::uint64_t n, double tol);
ScaledMatrix skew_evolution(const SystemDef& sys, const ProjectionDef& p, std::uint64_t m, std::uint64_t n,
                            double tol);

struct SkewResiduals {
  double b1 = 0.0;  // A_m^n B_m^n Q_m = Q_m
  double b2 = 0.0;  // B_m^n A_m^n Q_n = Q_n
  double b3 = 0.0;  // Q_n B_m^n Q_m = B_m^n Q_m
  double b4 = 0.0;  // B_m^m Q_m = Q_m
  double b5 = 0.0;  // B_m^p Q_m = B_n^p B_m^n Q_m
  double max() const;
};

/// Throws NotStronglyInvariant at the first non-iso pair.
SkewResiduals skew_identity_suite(const SystemDef& sys, const ProjectionDef& p, const PairWindow& window,
                                  double tol);

}  // namespace expsplit
