#include "expsplit/subspace.hpp"

#include <algorithm>
#include <vector>

#include "expsplit/errors.hpp"

namespace expsplit {

Subspace Subspace::whole(Index ambient_dim) {
  return Subspace{ambient_dim, Mat::Identity(ambient_dim, ambient_dim), kDefaultRankTol};
}

Subspace Subspace::zero(Index ambient_dim) {
  return Subspace{ambient_dim, Mat(ambient_dim, 0), kDefaultRankTol};
}

Subspace Subspace::span(const Mat& vectors, double rank_tol) { return column_space(vectors, rank_tol); }

namespace {

void orthogonalize_against(Vec& v, const std::vector<Vec>& basis) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const Vec& b : basis) v -= b.dot(v) * b;
  }
}

}  // namespace

Subspace column_space(const Mat& values, double rank_tol) {
  const Index rows = values.rows();
  std::vector<Vec> remaining;
  remaining.reserve(static_cast<std::size_t>(values.cols()));
  Real largest = 0;
  for (Index j = 0; j < values.cols(); ++j) {
    remaining.emplace_back(values.col(j));
    largest = std::max(largest, vector_norm(remaining.back(), NormKind::two));
  }
  std::vector<Vec> basis;
  if (largest == 0) return Subspace{rows, Mat(rows, 0), rank_tol};

  while (!remaining.empty() && static_cast<Index>(basis.size()) < rows) {
    std::size_t pivot = 0;
    Real pivot_norm = -1;
    for (std::size_t j = 0; j < remaining.size(); ++j) {
      const Real nj = vector_norm(remaining[j], NormKind::two);
      if (nj > pivot_norm) {
        pivot_norm = nj;
        pivot = j;
      }
    }
    if (pivot_norm <= Real(rank_tol) * largest) break;
    Vec q = remaining[pivot] / pivot_norm;
    orthogonalize_against(q, basis);
    q /= vector_norm(q, NormKind::two);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pivot));
    for (Vec& c : remaining) {
      for (int pass = 0; pass < 2; ++pass) c -= q.dot(c) * q;
    }
    basis.push_back(std::move(q));
  }

  Mat out(rows, static_cast<Index>(basis.size()));
  for (std::size_t j = 0; j < basis.size(); ++j) out.col(static_cast<Index>(j)) = basis[j];
  return Subspace{rows, std::move(out), rank_tol};
}

Subspace subspace_of_projector(const ScaledMatrix& p, ProjectorPart part, double rank_tol) {
  const Index d = p.dim();
  if (p.is_zero()) return part == ProjectorPart::range ? Subspace::zero(d) : Subspace::whole(d);

  const double residual = relative_difference(p * p, p, NormKind::sup);
  if (residual > rank_tol) throw NotAProjector(residual);

  const ScaledMatrix complement = ScaledMatrix::identity(d) - p;
  Subspace range = column_space(p.mantissa(), rank_tol);
  Subspace kernel = column_space(complement.mantissa(), rank_tol);
  if (range.dim() + kernel.dim() != d) throw NotAProjector(residual);
  range.rank_tol = kernel.rank_tol = rank_tol;
  return part == ProjectorPart::range ? range : kernel;
}

double subspace_distance(const Subspace& a, const Subspace& b) {
  if (a.dim() != b.dim() || a.ambient_dim != b.ambient_dim) return 1.0;
  if (a.dim() == 0) return 0.0;
  const Mat residual = b.basis - a.basis * (a.basis.transpose() * b.basis);
  Eigen::JacobiSVD<Mat> svd(residual);
  return static_cast<double>(svd.singularValues()(0));
}

double distance_from(const Subspace& s, const Vec& v) {
  const Real nv = vector_norm(v, NormKind::two);
  if (nv == 0) return 0.0;
  const Vec unit = v / nv;
  const Vec residual = unit - s.basis * (s.basis.transpose() * unit);
  return static_cast<double>(vector_norm(residual, NormKind::two));
}

RestrictedMap restrict_map(const ScaledMatrix& a, const Subspace& dom, const Subspace& cod, double rank_tol) {
  if (dom.ambient_dim != a.dim() || cod.ambient_dim != a.dim()) {
    throw DimensionMismatch("restricted map: subspace ambient dimension differs from operator");
  }
  RestrictedMap out;
  out.exponent = a.exponent();
  const Mat image = a.mantissa() * dom.basis;
  out.coords = cod.basis.transpose() * image;

  const Real image_scale = image.size() == 0 ? Real(0) : image.cwiseAbs().maxCoeff();
  if (image_scale > 0) {
    const Mat residual = (image - cod.basis * out.coords) / image_scale;
    out.containment_residual = static_cast<double>(residual.norm() / (image / image_scale).norm());
  }

  if (out.coords.size() == 0) return out;
  Eigen::JacobiSVD<Mat> svd(out.coords);
  const Vec& s = svd.singularValues();
  const Real top = s(0);
  for (Index i = 0; i < s.size(); ++i) {
    if (s(i) > Real(rank_tol) * top) ++out.rank;
  }
  const auto to_log = [&](const Real& x) {
    if (x == 0) return LogScalar::zero();
    return LogScalar::from_log2(LogScalar::from_value(x).log2() + static_cast<double>(out.exponent));
  };
  out.largest_singular = to_log(top);
  // Fewer codomain than domain dimensions leaves a kernel.
  out.smallest_singular = cod.dim() < dom.dim() ? LogScalar::zero() : to_log(s(s.size() - 1));
  return out;
}

RestrictedMap solve_restricted(const ScaledMatrix& a, const Subspace& dom, const Subspace& cod,
                               double rank_tol, double containment_tol) {
  RestrictedMap out = restrict_map(a, dom, cod, rank_tol);
  if (out.containment_residual > containment_tol) throw ContainmentViolation(out.containment_residual);
  return out;
}

}  // namespace expsplit
