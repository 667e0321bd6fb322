#include "expsplit/invariance.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "expsplit/errors.hpp"

namespace expsplit {

ProjectorData projector_data(const ProjectionDef& p, std::uint64_t n, double rank_tol) {
  ProjectorData out;
  out.p = projection(p, n);
  out.q = ScaledMatrix::identity(p.dim) - out.p;
  out.range = subspace_of_projector(out.p, ProjectorPart::range, rank_tol);
  out.kernel = subspace_of_projector(out.p, ProjectorPart::kernel, rank_tol);
  return out;
}

const ProjectorData& PairContext::at(std::uint64_t n) {
  std::lock_guard lock(mutex_);
  auto it = data_.find(n);
  if (it == data_.end()) it = data_.emplace(n, projector_data(*p_, n, rank_tol_)).first;
  return it->second;
}

InvarianceResult invariance_check(const SystemDef& sys, const ProjectionDef& p, const PairWindow& window,
                                  double tol) {
  if (sys.dim != p.dim) throw DimensionMismatch("system and projection dimensions differ");
  InvarianceResult out;
  ProjectorData here = projector_data(p, 0);
  for (std::uint64_t n = 0; n < window.M; ++n) {
    const ScaledMatrix a = step(sys, n);
    ProjectorData next = projector_data(p, n + 1);
    const double r = std::max(restrict_map(a, here.range, next.range).containment_residual,
                              restrict_map(a, here.kernel, next.kernel).containment_residual);
    out.residual = std::max(out.residual, r);
    if (r > tol && !out.witness) {
      out.ok = false;
      out.witness = n;
    }
    here = std::move(next);
  }
  return out;
}

std::string_view to_string(IsoVerdict verdict) {
  switch (verdict) {
    case IsoVerdict::iso: return "iso";
    case IsoVerdict::not_injective: return "not_injective";
    case IsoVerdict::not_surjective: return "not_surjective";
    case IsoVerdict::dim_mismatch: return "dim_mismatch";
    case IsoVerdict::containment_violation: return "containment_violation";
    case IsoVerdict::inconclusive: return "inconclusive";
  }
  return "iso";
}

IsoReport strong_invariance_check(PairContext& ctx, std::uint64_t m, std::uint64_t n, double tol) {
  const ScaledMatrix a = ctx.evolution(m, n);
  const Subspace& ker_n = ctx.at(n).kernel;
  const Subspace& ker_m = ctx.at(m).kernel;
  const RestrictedMap map = restrict_map(a, ker_n, ker_m, ctx.rank_tol());

  IsoReport out;
  out.m = m;
  out.n = n;
  out.dim_ker_n = ker_n.dim();
  out.dim_ker_m = ker_m.dim();
  out.containment_residual = map.containment_residual;
  out.rank = map.rank;
  out.smallest_singular = map.smallest_singular;
  out.largest_singular = map.largest_singular;

  const double ratio = out.largest_singular.is_zero() || out.smallest_singular.is_zero()
                           ? 0.0
                           : std::exp2(out.smallest_singular.log2() - out.largest_singular.log2());
  if (out.containment_residual > tol) {
    out.verdict = IsoVerdict::containment_violation;
  } else if (out.dim_ker_n != out.dim_ker_m) {
    out.verdict = IsoVerdict::dim_mismatch;
  } else if (out.rank < out.dim_ker_n) {
    out.verdict = IsoVerdict::not_injective;
  } else if (out.rank < out.dim_ker_m) {
    out.verdict = IsoVerdict::not_surjective;
  } else if (out.dim_ker_n > 0 && ratio <= 10 * ctx.rank_tol()) {
    out.verdict = IsoVerdict::inconclusive;
  } else {
    out.verdict = IsoVerdict::iso;
  }
  return out;
}

IsoReport strong_invariance_check(const SystemDef& sys, const ProjectionDef& p, std::uint64_t m,
                                  std::uint64_t n, double tol) {
  PairContext ctx(sys, p);
  return strong_invariance_check(ctx, m, n, tol);
}

std::optional<IsoReport> first_strong_invariance_failure(PairContext& ctx, const PairWindow& window, double tol) {
  for (const auto& [m, n] : window.pairs()) {
    IsoReport r = strong_invariance_check(ctx, m, n, tol);
    if (!r.is_iso()) return r;
  }
  return std::nullopt;
}

ScaledMatrix skew_evolution(PairContext& ctx, std::uint64_t m, std::uint64_t n, double tol) {
  const IsoReport report = strong_invariance_check(ctx, m, n, tol);
  if (!report.is_iso()) throw NotStronglyInvariant(m, n, std::string(to_string(report.verdict)));
  const ProjectorData& at_n = ctx.at(n);
  const ProjectorData& at_m = ctx.at(m);
  const Index d = ctx.system().dim;
  if (at_n.kernel.dim() == 0) return ScaledMatrix::zero(d);

  const ScaledMatrix a = ctx.evolution(m, n);
  const RestrictedMap map = restrict_map(a, at_n.kernel, at_m.kernel, ctx.rank_tol());
  const Mat embed = at_n.kernel.basis * map.coords.inverse() * at_m.kernel.basis.transpose();
  return ScaledMatrix(embed, -map.exponent) * at_m.q;
}

ScaledMatrix skew_evolution(const SystemDef& sys, const ProjectionDef& p, std::uint64_t m, std::uint64_t n,
                            double tol) {
  PairContext ctx(sys, p);
  return skew_evolution(ctx, m, n, tol);
}

double SkewResiduals::max() const { return std::max({b1, b2, b3, b4, b5}); }

SkewResiduals skew_identity_suite(const SystemDef& sys, const ProjectionDef& p, const PairWindow& window,
                                  double tol) {
  PairContext ctx(sys, p);
  const NormKind norm = sys.norm;
  std::map<std::pair<std::uint64_t, std::uint64_t>, ScaledMatrix> skew;
  for (const auto& [m, n] : window.pairs()) skew.emplace(std::pair{m, n}, skew_evolution(ctx, m, n, tol));

  SkewResiduals out;
  for (const auto& [key, b] : skew) {
    const auto [m, n] = key;
    const ScaledMatrix a = ctx.evolution(m, n);
    const ProjectorData& at_n = ctx.at(n);
    const ProjectorData& at_m = ctx.at(m);
    out.b1 = std::max(out.b1, relative_difference(a * b, at_m.q, norm));
    out.b2 = std::max(out.b2, relative_difference(b * a * at_n.q, at_n.q, norm));
    out.b3 = std::max(out.b3, relative_difference(at_n.q * b, b, norm));
    if (m == n) out.b4 = std::max(out.b4, relative_difference(b, at_m.q, norm));
  }
  window.for_each_triple([&](std::uint64_t m, std::uint64_t n, std::uint64_t q) {
    const ScaledMatrix& direct = skew.at({m, q});
    const ScaledMatrix composed = skew.at({n, q}) * skew.at({m, n});
    out.b5 = std::max(out.b5, relative_difference(direct, composed, norm));
  });
  return out;
}

}  // namespace expsplit
