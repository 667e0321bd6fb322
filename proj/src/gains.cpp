#include "expsplit/gains.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace expsplit {

double Gain::width() const {
  if (lower == upper) return 0.0;
  return upper.log2() - lower.log2();
}

namespace {

// Rounding level of A v relative to |A||v|. Corpus products cancel terms up
// to 2^126 times larger than their result, far above the working precision
// but far below this threshold.
constexpr double kKernelGamma = 1e-50;

using Fast = long double;
using FastMat = Eigen::Matrix<Fast, Eigen::Dynamic, Eigen::Dynamic>;
using FastVec = Eigen::Matrix<Fast, Eigen::Dynamic, 1>;

LogScalar to_log(const Real& x, std::int64_t exponent) {
  if (x == 0) return LogScalar::zero();
  return LogScalar::from_log2(LogScalar::from_value(x).log2() + static_cast<double>(exponent));
}

// ||A v|| / ||v|| for the mantissa of A; the caller adds the exponent.
Real ratio(const Mat& a, const Vec& v, NormKind norm) {
  const Real nv = vector_norm(v, norm);
  if (nv == 0) return 0;
  return vector_norm(a * v, norm) / nv;
}

// Av vanishes relative to the rounding level of |A||v|.
bool in_kernel(const Mat& a, const Vec& v) {
  const Real scale = vector_norm(a.cwiseAbs() * v.cwiseAbs(), NormKind::two);
  if (scale == 0) return true;
  return vector_norm(a * v, NormKind::two) <= Real(kKernelGamma) * Real(a.rows()) * scale;
}

// Rows of `m` (n x k, rank k) picked by column-pivoted QR of its transpose.
std::vector<Index> pivot_rows(const Mat& m) {
  Eigen::ColPivHouseholderQR<Mat> qr(m.transpose());
  const auto& perm = qr.colsPermutation().indices();
  std::vector<Index> rows;
  for (Index i = 0; i < m.cols(); ++i) rows.push_back(perm(i));
  return rows;
}

Mat select_rows(const Mat& m, const std::vector<Index>& rows) {
  Mat out(static_cast<Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Index>(i)) = m.row(rows[i]);
  return out;
}

// Basis of span(U) whose pivot rows form the identity, so ||Vy|| >= ||y||
// for the sup and one norms.
Mat echelon_basis(const Mat& u) {
  const Mat up = select_rows(u, pivot_rows(u));
  return u * up.inverse();
}

Fast fast_norm(const FastVec& v, NormKind norm) {
  switch (norm) {
    case NormKind::sup: return v.cwiseAbs().maxCoeff();
    case NormKind::one: return v.cwiseAbs().sum();
    case NormKind::two: return v.norm();
  }
  return 0;
}

// Extreme ratio ||AUy|| / ||Uy|| over 10 * 4^k Gaussian coefficient vectors y.
// AU is already formed at full precision, so the samples run in long double;
// random combinations do not cancel the way evolution products do.
Real sampled_ratio(const Mat& au, const Subspace& s, NormKind norm, const GainOptions& options, bool largest,
                   Real fallback) {
  const Index k = s.dim();
  if (k > options.max_sample_dim) return fallback;
  const Real scale = au.cwiseAbs().maxCoeff();
  if (scale == 0) return fallback;
  const FastMat fau = (au / scale).unaryExpr([](const Real& x) { return static_cast<Fast>(x); });
  const FastMat fu = s.basis.unaryExpr([](const Real& x) { return static_cast<Fast>(x); });
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const long samples = 10L << (2 * k);
  FastVec y(k);
  Fast best = static_cast<Fast>(fallback / scale);
  for (long i = 0; i < samples; ++i) {
    for (Index j = 0; j < k; ++j) y(j) = static_cast<Fast>(normal(rng));
    const Fast nv = fast_norm(fu * y, norm);
    if (nv == 0) continue;
    const Fast r = fast_norm(fau * y, norm) / nv;
    best = largest ? std::max(best, r) : std::min(best, r);
  }
  return Real(best) * scale;
}

}  // namespace

Gain restricted_sup_gain(const ScaledMatrix& a, const Subspace& s, NormKind norm, const GainOptions& options) {
  const Index k = s.dim();
  if (k == 0 || a.is_zero()) return {LogScalar::zero(), LogScalar::zero()};
  const Mat& am = a.mantissa();
  const std::int64_t e = a.exponent();

  if (k == 1) {
    const LogScalar g = to_log(ratio(am, s.basis.col(0), norm), e);
    return {g, g};
  }
  const Mat au = am * s.basis;
  Eigen::JacobiSVD<Mat> svd(au, Eigen::ComputeThinV);
  const Real sigma_max = svd.singularValues()(0);
  if (norm == NormKind::two) {
    const LogScalar g = to_log(sigma_max, e);
    return {g, g};
  }

  Real best = 0;
  const auto consider = [&](const Vec& v) { best = std::max(best, ratio(am, v, norm)); };
  for (Index j = 0; j < k; ++j) consider(s.basis.col(j));
  consider(s.basis * svd.matrixV().col(0));

  const Mat v = echelon_basis(s.basis);
  const Mat w = am * v;
  for (Index i = 0; i < w.rows(); ++i) {
    const Vec y = w.row(i).transpose().unaryExpr([](const Real& x) { return x < 0 ? Real(-1) : Real(1); });
    consider(v * y);
  }
  best = std::max(best, sampled_ratio(au, s, norm, options, true, best));

  const Real dim_factor = sqrt(Real(a.dim()));
  Real upper = std::min(dim_factor * sigma_max, operator_norm(w, norm));
  upper = std::max(upper, best);
  return {to_log(best, e), to_log(upper, e)};
}

Gain restricted_inf_gain(const ScaledMatrix& a, const Subspace& s, NormKind norm, const GainOptions& options) {
  const Index k = s.dim();
  if (k == 0) return {LogScalar::infinity(), LogScalar::infinity()};
  if (a.is_zero()) return {LogScalar::zero(), LogScalar::zero()};
  const Mat& am = a.mantissa();
  const std::int64_t e = a.exponent();

  const Mat au = am * s.basis;
  Eigen::JacobiSVD<Mat> svd(au, Eigen::ComputeThinV);
  const Real sigma_min = svd.singularValues()(k - 1);
  const Vec weakest = s.basis * svd.matrixV().col(k - 1);
  if (sigma_min == 0 || in_kernel(am, weakest)) return {LogScalar::zero(), LogScalar::zero()};

  if (k == 1) {
    const LogScalar g = to_log(ratio(am, s.basis.col(0), norm), e);
    return {g, g};
  }
  if (norm == NormKind::two) {
    const LogScalar g = to_log(sigma_min, e);
    return {g, g};
  }

  Real best = ratio(am, weakest, norm);
  const auto consider = [&](const Vec& v) { best = std::min(best, ratio(am, v, norm)); };
  for (Index j = 0; j < k; ++j) consider(s.basis.col(j));

  const Mat v = echelon_basis(s.basis);
  const Mat w = am * v;
  for (Index j = 0; j < k; ++j) consider(v.col(j));
  best = std::min(best, sampled_ratio(au, s, norm, options, false, best));

  Real lower = sigma_min / sqrt(Real(a.dim()));
  const Mat wp = select_rows(w, pivot_rows(w));
  Eigen::FullPivLU<Mat> lu(wp);
  if (lu.isInvertible()) {
    const Real bound = 1 / (operator_norm(v, norm) * operator_norm(Mat(lu.inverse()), norm));
    lower = std::max(lower, bound);
  }
  lower = std::min(lower, best);
  return {to_log(lower, e), to_log(best, e)};
}

}  // namespace expsplit
