#include "expsplit/scaled_matrix.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "expsplit/errors.hpp"

namespace expsplit {

std::string_view to_string(NormKind kind) {
  switch (kind) {
    case NormKind::sup: return "sup";
    case NormKind::one: return "one";
    case NormKind::two: return "two";
  }
  return "sup";
}

NormKind parse_norm(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (lower == "sup" || lower == "inf" || lower == "max") return NormKind::sup;
  if (lower == "one" || lower == "1") return NormKind::one;
  if (lower == "two" || lower == "2") return NormKind::two;
  throw ConfigError("unknown norm '" + std::string(text) + "' (expected sup, one or two)");
}

Real vector_norm(const Vec& v, NormKind kind) {
  if (v.size() == 0) return 0;
  switch (kind) {
    case NormKind::sup: return v.cwiseAbs().maxCoeff();
    case NormKind::one: return v.cwiseAbs().sum();
    case NormKind::two: {
      // Scale first so squares cannot overflow or underflow.
      const Real scale = v.cwiseAbs().maxCoeff();
      if (scale == 0) return 0;
      return scale * (v / scale).norm();
    }
  }
  return 0;
}

ScaledMatrix::ScaledMatrix(Mat values, std::int64_t exponent)
    : mantissa_(std::move(values)), exponent_(exponent) {
  if (mantissa_.rows() != mantissa_.cols()) {
    throw DimensionMismatch("scaled matrices are square; got " + std::to_string(mantissa_.rows()) +
                            "x" + std::to_string(mantissa_.cols()));
  }
  renormalize();
}

ScaledMatrix ScaledMatrix::identity(Index dim) { return ScaledMatrix(Mat::Identity(dim, dim)); }

ScaledMatrix ScaledMatrix::zero(Index dim) { return ScaledMatrix(Mat::Zero(dim, dim)); }

void ScaledMatrix::renormalize() {
  max_abs_ = mantissa_.size() == 0 ? Real(0) : mantissa_.cwiseAbs().maxCoeff();
  if (!is_finite(max_abs_)) throw DomainError("non-finite entry in scaled matrix");
  if (max_abs_ == 0) {
    mantissa_.setZero();
    exponent_ = 0;
    return;
  }
  const std::int64_t shift = binary_exponent(max_abs_);
  if (shift != 0) {
    mantissa_ = mantissa_.unaryExpr([shift](const Real& x) { return ldexp2(x, -shift); });
    exponent_ += shift;
    max_abs_ = ldexp2(max_abs_, -shift);
  }
}

LogScalar ScaledMatrix::max_abs() const {
  if (is_zero()) return LogScalar::zero();
  return LogScalar::from_log2(LogScalar::from_value(max_abs_).log2() + static_cast<double>(exponent_));
}

LogScalar ScaledMatrix::entry_magnitude(Index row, Index col) const {
  const Real x = mantissa_(row, col);
  if (x == 0) return LogScalar::zero();
  return LogScalar::from_log2(LogScalar::from_value(x).log2() + static_cast<double>(exponent_));
}

int ScaledMatrix::entry_sign(Index row, Index col) const {
  const Real x = mantissa_(row, col);
  return (x > 0) - (x < 0);
}

Real ScaledMatrix::entry(Index row, Index col) const {
  return ldexp2(mantissa_(row, col), exponent_);
}

Mat ScaledMatrix::dense() const {
  const std::int64_t e = exponent_;
  return mantissa_.unaryExpr([e](const Real& x) { return ldexp2(x, e); });
}

ScaledMatrix ScaledMatrix::operator*(const ScaledMatrix& rhs) const {
  if (dim() != rhs.dim()) {
    throw DimensionMismatch("matmul_scaled: " + std::to_string(dim()) + " vs " + std::to_string(rhs.dim()));
  }
  if (is_zero() || rhs.is_zero()) return zero(dim());
  Mat product = mantissa_ * rhs.mantissa_;
  return ScaledMatrix(std::move(product), exponent_ + rhs.exponent_);
}

namespace {

// Mantissa of `m` expressed against the larger exponent `target`.
Mat aligned(const Mat& m, std::int64_t exponent, std::int64_t target) {
  const std::int64_t shift = exponent - target;
  if (shift == 0) return m;
  // Far below the working precision everything is negligible anyway.
  const std::int64_t s = std::max<std::int64_t>(shift, -(std::int64_t{1} << 28));
  return m.unaryExpr([s](const Real& x) { return ldexp2(x, s); });
}

}  // namespace

ScaledMatrix ScaledMatrix::operator+(const ScaledMatrix& rhs) const {
  if (dim() != rhs.dim()) throw DimensionMismatch("matrix sum: dimension mismatch");
  if (is_zero()) return rhs;
  if (rhs.is_zero()) return *this;
  const std::int64_t target = std::max(exponent_, rhs.exponent_);
  Mat sum = aligned(mantissa_, exponent_, target) + aligned(rhs.mantissa_, rhs.exponent_, target);
  return ScaledMatrix(std::move(sum), target);
}

ScaledMatrix ScaledMatrix::operator-() const {
  ScaledMatrix out = *this;
  out.mantissa_ = -out.mantissa_;
  return out;
}

ScaledMatrix ScaledMatrix::operator-(const ScaledMatrix& rhs) const { return *this + (-rhs); }

ScaledMatrix ScaledMatrix::scaled(const Real& s, std::int64_t shift) const {
  if (s == 0 || is_zero()) return zero(dim());
  return ScaledMatrix(mantissa_ * s, exponent_ + shift);
}

ScaledMatrix ScaledMatrix::inverse(double rank_tol) const {
  if (is_zero()) throw DomainError("inverse of the zero matrix");
  Eigen::FullPivLU<Mat> lu(mantissa_);
  lu.setThreshold(Real(rank_tol));
  if (!lu.isInvertible()) throw DomainError("matrix is numerically singular");
  return ScaledMatrix(lu.inverse(), -exponent_);
}

bool ScaledMatrix::same_representation(const ScaledMatrix& other) const {
  if (dim() != other.dim() || exponent_ != other.exponent_) return false;
  for (Index i = 0; i < mantissa_.size(); ++i) {
    const Real a = mantissa_.data()[i];
    const Real b = other.mantissa_.data()[i];
    if (!(a == b) || sign_bit(a) != sign_bit(b)) return false;
  }
  return true;
}

ScaledMatrix matmul_scaled(const ScaledMatrix& a, const ScaledMatrix& b) { return a * b; }

Real operator_norm(const Mat& a, NormKind kind) {
  if (a.size() == 0) return 0;
  switch (kind) {
    case NormKind::sup: return a.cwiseAbs().rowwise().sum().maxCoeff();
    case NormKind::one: return a.cwiseAbs().colwise().sum().maxCoeff();
    case NormKind::two: {
      const Real scale = a.cwiseAbs().maxCoeff();
      if (scale == 0) return 0;
      Eigen::JacobiSVD<Mat> svd(a / scale);
      return scale * svd.singularValues()(0);
    }
  }
  return 0;
}

LogScalar operator_norm(const ScaledMatrix& a, NormKind kind) {
  if (a.is_zero()) return LogScalar::zero();
  const Real n = operator_norm(a.mantissa(), kind);
  return LogScalar::from_log2(LogScalar::from_value(n).log2() + static_cast<double>(a.exponent()));
}

double relative_difference(const ScaledMatrix& a, const ScaledMatrix& b, NormKind kind) {
  const LogScalar scale = max(operator_norm(a, kind), operator_norm(b, kind));
  if (scale.is_zero()) return 0.0;
  const LogScalar diff = operator_norm(a - b, kind);
  if (diff.is_zero()) return 0.0;
  return std::exp2(diff.log2() - scale.log2());
}

Real inverse_condition(const ScaledMatrix& a) {
  if (a.is_zero()) return 0;
  Eigen::JacobiSVD<Mat> svd(a.mantissa());
  const auto& s = svd.singularValues();
  return s(s.size() - 1) / s(0);
}

}  // namespace expsplit
