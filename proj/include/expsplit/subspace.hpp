#pragma once

#include "expsplit/scaled_matrix.hpp"

namespace expsplit {

/// Default numerical-rank threshold (singular value / column norm ratio).
inline constexpr double kDefaultRankTol = 1e-8;

/// Subspace of R^d held as a basis with two-norm orthonormal columns.
struct Subspace {
  Index ambient_dim = 0;
  Mat basis;  // ambient_dim x k
  double rank_tol = kDefaultRankTol;

  Index dim() const { return basis.cols(); }
  static Subspace whole(Index ambient_dim);
  static Subspace zero(Index ambient_dim);
  static Subspace span(const Mat& vectors, double rank_tol = kDefaultRankTol);
};

enum class ProjectorPart { range, kernel };

/// Orthonormal basis of the column space of `values`, by pivoted modified
/// Gram-Schmidt with one reorthogonalization pass. Each basis vector keeps
/// componentwise relative accuracy, which matters when a column mixes entries
/// of wildly different magnitude.
Subspace column_space(const Mat& values, double rank_tol = kDefaultRankTol);

/// Range P or Ker P (= Range(I - P)); throws NotAProjector unless
/// ||P^2 - P|| <= rank_tol * ||P|| and rank P + rank(I - P) = dim.
Subspace subspace_of_projector(const ScaledMatrix& p, ProjectorPart part,
                               double rank_tol = kDefaultRankTol);

/// Largest principal-angle sine between two subspaces (1 if dimensions differ).
double subspace_distance(const Subspace& a, const Subspace& b);

/// Relative distance of `v` from span(S): ||v - UU^T v|| / ||v||.
double distance_from(const Subspace& s, const Vec& v);

/// A restricted map A|S_dom : S_dom -> S_cod in orthonormal coordinates.
/// The represented coordinate matrix is coords * 2^exponent.
struct RestrictedMap {
  Mat coords;  // k_cod x k_dom
  std::int64_t exponent = 0;
  Index rank = 0;
  LogScalar smallest_singular = LogScalar::zero();
  LogScalar largest_singular = LogScalar::zero();
  double containment_residual = 0.0;
};

/// Coordinates of A restricted to S_dom in the basis of S_cod, with the
/// numerical rank and extreme singular values. Does not throw on containment;
/// the residual is reported.
RestrictedMap restrict_map(const ScaledMatrix& a, const Subspace& dom, const Subspace& cod,
                           double rank_tol = kDefaultRankTol);

/// As restrict_map, but throws ContainmentViolation when A*S_dom leaves
/// span(S_cod) by more than `containment_tol` (relative).
RestrictedMap solve_restricted(const ScaledMatrix& a, const Subspace& dom, const Subspace& cod,
                               double rank_tol = kDefaultRankTol, double containment_tol = 1e-9);

}  // namespace expsplit
