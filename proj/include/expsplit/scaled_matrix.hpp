#pragma once

#include <cstdint>
#include <string_view>

#include <Eigen/Dense>

#include "expsplit/log_scalar.hpp"

namespace expsplit {

using Index = Eigen::Index;
using Mat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
using Vec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

/// Induced operator norm on R^d.
enum class NormKind { sup, one, two };

std::string_view to_string(NormKind kind);
NormKind parse_norm(std::string_view text);

/// Vector norm matching the induced operator norm of the same kind.
Real vector_norm(const Vec& v, NormKind kind);

/// Square matrix stored as mantissa * 2^exponent.
///
/// The mantissa's largest absolute entry lies in [1/2, 1) unless the matrix is
/// zero, which is stored as (0, 0). Rescaling is by powers of two only, so the
/// represented matrix is preserved exactly outside the subnormal range.
class ScaledMatrix {
 public:
  ScaledMatrix() = default;
  explicit ScaledMatrix(Mat values, std::int64_t exponent = 0);

  static ScaledMatrix identity(Index dim);
  static ScaledMatrix zero(Index dim);

  Index dim() const { return mantissa_.rows(); }
  const Mat& mantissa() const { return mantissa_; }
  std::int64_t exponent() const { return exponent_; }
  bool is_zero() const { return max_abs_ == 0; }

  /// log2 of the largest absolute entry.
  LogScalar max_abs() const;
  /// The entry as a magnitude/sign pair; safe for any exponent.
  LogScalar entry_magnitude(Index row, Index col) const;
  int entry_sign(Index row, Index col) const;
  /// Entry with the exponent applied.
  Real entry(Index row, Index col) const;
  /// Dense copy with the exponent applied.
  Mat dense() const;

  ScaledMatrix operator*(const ScaledMatrix& rhs) const;
  ScaledMatrix operator+(const ScaledMatrix& rhs) const;
  ScaledMatrix operator-(const ScaledMatrix& rhs) const;
  ScaledMatrix operator-() const;
  /// Multiplies by s * 2^shift.
  ScaledMatrix scaled(const Real& s, std::int64_t shift = 0) const;

  /// Inverse via full-pivot LU; throws DomainError when numerically singular.
  ScaledMatrix inverse(double rank_tol = 1e-12) const;

  /// Bitwise equality of the normalized representation.
  bool same_representation(const ScaledMatrix& other) const;

 private:
  void renormalize();

  Mat mantissa_;
  std::int64_t exponent_ = 0;
  Real max_abs_ = 0;
};

ScaledMatrix matmul_scaled(const ScaledMatrix& a, const ScaledMatrix& b);

/// Induced operator norm; exact for sup and one, SVD based for two.
LogScalar operator_norm(const ScaledMatrix& a, NormKind kind);

/// Unscaled norm of a plain matrix (for mantissas and basis blocks).
Real operator_norm(const Mat& a, NormKind kind);

/// ||A - B|| / max(||A||, ||B||), 0 when both vanish.
double relative_difference(const ScaledMatrix& a, const ScaledMatrix& b, NormKind kind);

/// Reciprocal condition estimate sigma_min / sigma_max of the mantissa.
Real inverse_condition(const ScaledMatrix& a);

}  // namespace expsplit
