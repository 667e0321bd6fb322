#include "expsplit/projections.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "expsplit/errors.hpp"

namespace expsplit {

ProjectionDef explicit_projection(std::vector<ScaledMatrix> matrices) {
  if (matrices.empty()) throw ConfigError("explicit projection needs at least one matrix");
  const Index dim = matrices.front().dim();
  for (const auto& m : matrices) {
    if (m.dim() != dim) throw ConfigError("explicit projection matrices differ in dimension");
  }
  ProjectionDef p;
  p.dim = dim;
  p.spec.matrices = matrices;
  p.rule = [matrices = std::move(matrices)](std::uint64_t n) { return matrices[n % matrices.size()]; };
  return p;
}

ScaledMatrix projection(const ProjectionDef& p, std::uint64_t n) {
  if (!p.rule) throw DomainError("projection has no rule");
  ScaledMatrix out = p.rule(n);
  if (out.dim() != p.dim) {
    throw DomainError("projection rule returned dimension " + std::to_string(out.dim()) + " at n = " +
                      std::to_string(n) + ", expected " + std::to_string(p.dim));
  }
  return out;
}

ScaledMatrix complement(const ProjectionDef& p, std::uint64_t n) {
  return ScaledMatrix::identity(p.dim) - projection(p, n);
}

IdempotencyResult validate_projection(const ProjectionDef& p, const PairWindow& window, double tol,
                                      NormKind norm) {
  IdempotencyResult out;
  for (std::uint64_t n = 0; n <= window.M; ++n) {
    const ScaledMatrix pn = projection(p, n);
    const double r = relative_difference(pn * pn, pn, norm);
    out.residual = std::max(out.residual, r);
    if (r > tol && !out.witness) {
      out.ok = false;
      out.witness = n;
    }
  }
  return out;
}

double SharedRangeResiduals::max() const { return std::max({r1, r2, r3, r4}); }

SharedRangeResiduals shared_range_identities(const ProjectionDef& p, const ProjectionDef& r,
                                             const PairWindow& window, double tol, NormKind norm) {
  if (p.dim != r.dim) throw DimensionMismatch("projection sequences differ in dimension");
  SharedRangeResiduals out;
  const ScaledMatrix id = ScaledMatrix::identity(p.dim);
  for (std::uint64_t n = 0; n <= window.M; ++n) {
    const ScaledMatrix pn = projection(p, n);
    const ScaledMatrix rn = projection(r, n);
    const double r1 = relative_difference(pn * rn, rn, norm);
    const double r2 = relative_difference(rn * pn, pn, norm);
    if (r1 > tol || r2 > tol) throw RangeMismatch(n);
    const ScaledMatrix qn = id - pn;
    const ScaledMatrix sn = id - rn;
    const double r3 = std::max(relative_difference(qn * sn, qn, norm),
                               relative_difference((id + rn - pn) * sn, qn, norm));
    const double r4 = std::max(relative_difference(sn * qn, sn, norm),
                               relative_difference((id + pn - rn) * qn, sn, norm));
    out.r1 = std::max(out.r1, r1);
    out.r2 = std::max(out.r2, r2);
    out.r3 = std::max(out.r3, r3);
    out.r4 = std::max(out.r4, r4);
  }
  return out;
}

ExpBoundCheck exp_bound_certify(const ProjectionDef& p, const ExpBoundCertificate& cert,
                                const PairWindow& window, NormKind norm, double tol) {
  ExpBoundCheck out;
  for (std::uint64_t n = 0; n <= window.M; ++n) {
    const LogScalar lhs = operator_norm(projection(p, n), norm);
    const LogScalar rhs = LogScalar::from_log2(cert.log2_M + static_cast<double>(n) * cert.log2_p);
    if (lhs.log2() > rhs.log2() + tol) {
      out.ok = false;
      out.witness = n;
      out.lhs = lhs;
      out.rhs = rhs;
      return out;
    }
  }
  return out;
}

std::string_view to_string(Trend trend) {
  switch (trend) {
    case Trend::bounded: return "bounded";
    case Trend::exponential: return "exponential";
    case Trend::superexponential: return "superexponential";
  }
  return "bounded";
}

ExpBoundFit exp_bound_fit(const ProjectionDef& p, const PairWindow& window, NormKind norm, double M_cap) {
  if (window.M < 4) throw DomainError("exp_bound_fit needs a window of at least M = 4");
  std::vector<double> y;
  for (std::uint64_t n = 0; n <= window.M; ++n) {
    const LogScalar g = operator_norm(projection(p, n), norm);
    y.push_back(g.is_zero() ? 0.0 : std::max(0.0, g.log2()));
  }
  ExpBoundFit out;
  const double top = *std::max_element(y.begin(), y.end());
  const double cap = std::log2(M_cap);
  if (top <= cap) {
    out.cert = {top, 0.0};
  } else {
    out.cert.log2_M = y.front();
    for (std::size_t n = 1; n < y.size(); ++n) {
      out.cert.log2_p = std::max(out.cert.log2_p, (y[n] - out.cert.log2_M) / static_cast<double>(n));
    }
  }
  out.within_cap = out.cert.log2_M <= cap;

  // Least-squares line and parabola through n -> log2 ||P_n||.
  const auto count = static_cast<Eigen::Index>(y.size());
  Eigen::MatrixXd basis(count, 3);
  Eigen::VectorXd values(count);
  for (Eigen::Index n = 0; n < count; ++n) {
    const double x = static_cast<double>(n);
    basis.row(n) << 1.0, x, x * x;
    values(n) = y[static_cast<std::size_t>(n)];
  }
  out.slope = basis.leftCols(2).colPivHouseholderQr().solve(values)(1);
  out.curvature = basis.colPivHouseholderQr().solve(values)(2);
  if (out.curvature > 0.1) {
    out.trend = Trend::superexponential;
  } else if (out.slope <= 0.05) {
    out.trend = Trend::bounded;
  } else {
    out.trend = Trend::exponential;
  }
  return out;
}

}  // namespace expsplit
