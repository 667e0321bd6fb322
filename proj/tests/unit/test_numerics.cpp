#include <doctest.h>

#include <cmath>

#include "expsplit/errors.hpp"
#include "expsplit/gains.hpp"
#include "generators.hpp"

using namespace expsplit;

namespace {

Mat mat2(double a, double b, double c, double d) {
  Mat m(2, 2);
  m << Real(a), Real(b), Real(c), Real(d);
  return m;
}

Vec random_combination(gen::Gen& g, const Mat& basis) {
  Vec coeffs(basis.cols());
  for (Index i = 0; i < basis.cols(); ++i) coeffs(i) = Real(g.uniform(-1, 1));
  return basis * coeffs;
}

double ratio_log2(const ScaledMatrix& a, const Vec& v, NormKind norm) {
  const Vec av = a.mantissa() * v;
  return log2_abs(vector_norm(av, norm)) + static_cast<double>(a.exponent()) - log2_abs(vector_norm(v, norm));
}

}  // namespace

TEST_CASE("log scalar arithmetic and sentinels") {
  CHECK(LogScalar::from_value(Real(8)).log2() == 3.0);
  CHECK(LogScalar::from_value(Real(-0.25)).log2() == -2.0);
  CHECK(LogScalar::from_value(Real(0)).is_zero());
  CHECK((LogScalar::from_log2(3) * LogScalar::from_log2(-5)).log2() == -2.0);
  CHECK((LogScalar::zero() * LogScalar::infinity()).is_zero());
  CHECK((LogScalar::from_log2(1) / LogScalar::from_log2(4)).log2() == -3.0);
  CHECK(LogScalar::zero() < LogScalar::from_log2(-1e6));
  CHECK(max(LogScalar::one(), LogScalar::from_log2(2)).log2() == 2.0);
  CHECK(LogScalar::zero().decimal() == "0");
  CHECK(LogScalar::infinity().decimal() == "inf");
  CHECK(LogScalar::from_log2(0).decimal(4) == "1.000e+00");
  CHECK(LogScalar::from_log2(10).decimal(4) == "1.024e+03");
  // 2^4000 = 1.3182...e+1204, far outside double range.
  CHECK(LogScalar::from_log2(4000).decimal(5) == "1.3182e+1204");
  CHECK(LogScalar::from_log2(4000).value() == exp2r(Real(4000)));
}

TEST_CASE("real helpers") {
  CHECK(ldexp2(Real(3), 100) == Real(3) * exp2r(Real(100)));
  CHECK(binary_exponent(Real(1)) == 1);
  CHECK(binary_exponent(Real(0.75)) == 0);
  CHECK(binary_exponent(Real(0)) == 0);
  CHECK(sign_bit(Real(-2)));
  CHECK_FALSE(sign_bit(Real(2)));
  CHECK(log2_abs(Real(0)) == -std::numeric_limits<double>::infinity());
  CHECK(log2_abs(ldexp2(Real(1), -3000)) == -3000.0);
}

TEST_CASE("scaled matrix normalization keeps the represented value") {
  const ScaledMatrix a(mat2(3, 0, 0, -1), 5);
  CHECK(a.max_abs().log2() == doctest::Approx(5 + std::log2(3.0)));
  CHECK(a.entry(0, 0) == 96);
  CHECK(a.entry(1, 1) == -32);
  CHECK(a.entry_sign(1, 1) == -1);
  CHECK(ScaledMatrix::zero(2).is_zero());
  CHECK(ScaledMatrix::zero(2).exponent() == 0);
  // Exponents far beyond any floating type.
  ScaledMatrix big = ScaledMatrix::identity(2).scaled(Real(1), 100000);
  ScaledMatrix product = big * big;
  CHECK(product.max_abs().log2() == 200000.0);
  CHECK((product * big.inverse()).max_abs().log2() == doctest::Approx(100000.0));
  CHECK(big.same_representation(ScaledMatrix(Mat::Identity(2, 2), 100000)));
}

TEST_CASE("operator norms") {
  const ScaledMatrix a(mat2(1, -2, 3, 4));
  CHECK(operator_norm(a, NormKind::sup).log2() == doctest::Approx(std::log2(7.0)));
  CHECK(operator_norm(a, NormKind::one).log2() == doctest::Approx(std::log2(6.0)));
  // sigma_max^2 = 15 + sqrt(125).
  CHECK(operator_norm(a, NormKind::two).log2() == doctest::Approx(0.5 * std::log2(15 + std::sqrt(125.0))));
  CHECK(operator_norm(ScaledMatrix::zero(3), NormKind::two).is_zero());
  CHECK(parse_norm("SUP") == NormKind::sup);
  CHECK_THROWS_AS(parse_norm("frobenius"), ConfigError);
}

TEST_CASE("property: operator norms are submultiplicative") {
  gen::for_all(11, 60, [](gen::Gen& g, int i) {
    CAPTURE(i);
    const Index dim = g.integer(1, 5);
    const ScaledMatrix a(g.matrix(dim, 20)), b(g.matrix(dim, 20));
    for (NormKind norm : {NormKind::sup, NormKind::one, NormKind::two}) {
      CHECK(operator_norm(a * b, norm).log2() <= operator_norm(a, norm).log2() + operator_norm(b, norm).log2() + 1e-12);
    }
  });
}

TEST_CASE("subspaces of projectors") {
  const ScaledMatrix p(mat2(1, 3, 0, 0));
  const Subspace range = subspace_of_projector(p, ProjectorPart::range);
  const Subspace kernel = subspace_of_projector(p, ProjectorPart::kernel);
  CHECK(range.dim() == 1);
  CHECK(kernel.dim() == 1);
  Vec e1(2), k(2);
  e1 << 1, 0;
  k << -3, 1;
  CHECK(distance_from(range, e1) < 1e-30);
  CHECK(distance_from(kernel, k) < 1e-30);
  CHECK_THROWS_AS(subspace_of_projector(ScaledMatrix(mat2(1, 0, 0, 2)), ProjectorPart::range), NotAProjector);
  CHECK(Subspace::zero(3).dim() == 0);
  CHECK(Subspace::whole(3).dim() == 3);
}

TEST_CASE("property: column space is invariant under change of basis") {
  gen::for_all(12, 50, [](gen::Gen& g, int i) {
    CAPTURE(i);
    const Index dim = g.integer(2, 6);
    const Index k = g.integer(1, static_cast<int>(dim));
    const Mat b = g.basis(dim, k);
    const Mat r = g.invertible(k);
    CHECK(subspace_distance(column_space(b), column_space(b * r)) < 1e-40);
    CHECK(column_space(b).dim() == k);
  });
}

TEST_CASE("restricted gains: oracles") {
  const ScaledMatrix a(mat2(2, 0, 0, 3));
  Mat e1(2, 1), diag(2, 1);
  e1 << 1, 0;
  diag << 1, 1;
  const Subspace s1 = Subspace::span(e1), sd = Subspace::span(diag);
  for (NormKind norm : {NormKind::sup, NormKind::one, NormKind::two}) {
    CAPTURE(to_string(norm));
    CHECK(restricted_sup_gain(a, s1, norm).exact());
    CHECK(restricted_sup_gain(a, s1, norm).upper.log2() == doctest::Approx(1.0));
    CHECK(restricted_inf_gain(a, s1, norm).lower.log2() == doctest::Approx(1.0));
    CHECK(restricted_sup_gain(a, Subspace::zero(2), norm).upper.is_zero());
    CHECK(restricted_inf_gain(a, Subspace::zero(2), norm).lower.is_infinite());
  }
  // v = (1, 1): sup norm ratio 3, one norm ratio 5/2, two norm sqrt(13/2).
  CHECK(restricted_sup_gain(a, sd, NormKind::sup).upper.log2() == doctest::Approx(std::log2(3.0)));
  CHECK(restricted_sup_gain(a, sd, NormKind::one).upper.log2() == doctest::Approx(std::log2(2.5)));
  CHECK(restricted_sup_gain(a, sd, NormKind::two).upper.log2() == doctest::Approx(0.5 * std::log2(6.5)));
  // Whole space: the operator norm and its inverse counterpart.
  const Gain whole = restricted_sup_gain(a, Subspace::whole(2), NormKind::sup);
  CHECK(whole.lower.log2() <= std::log2(3.0) + 1e-12);
  CHECK(whole.upper.log2() >= std::log2(3.0) - 1e-12);
  CHECK(restricted_inf_gain(a, Subspace::whole(2), NormKind::two).lower.log2() == doctest::Approx(1.0));
  // A line inside the kernel has zero inf-gain.
  const ScaledMatrix singular(mat2(1, 0, 0, 0));
  Mat e2(2, 1);
  e2 << 0, 1;
  CHECK(restricted_inf_gain(singular, Subspace::span(e2), NormKind::sup).upper.is_zero());
}

TEST_CASE("property: gain brackets contain every sampled ratio") {
  gen::for_all(13, 40, [](gen::Gen& g, int i) {
    CAPTURE(i);
    const Index dim = g.integer(2, 5);
    const Index k = g.integer(1, static_cast<int>(dim));
    const ScaledMatrix a(g.matrix(dim, 3), g.integer(-50, 50));
    const Mat b = g.basis(dim, k);
    const Subspace s = column_space(b);
    for (NormKind norm : {NormKind::sup, NormKind::one, NormKind::two}) {
      const Gain sup = restricted_sup_gain(a, s, norm);
      const Gain inf = restricted_inf_gain(a, s, norm);
      CHECK(sup.lower <= sup.upper);
      CHECK(inf.lower <= inf.upper);
      CHECK(inf.lower.log2() <= sup.upper.log2() + 1e-12);
      for (int t = 0; t < 20; ++t) {
        const double r = ratio_log2(a, random_combination(g, b), norm);
        CHECK(r <= sup.upper.log2() + 1e-12);
        CHECK(r >= inf.lower.log2() - 1e-12);
      }
    }
  });
}

TEST_CASE("restricted maps report containment") {
  const ScaledMatrix a(mat2(0, 1, 1, 0));
  Mat e1(2, 1), e2(2, 1);
  e1 << 1, 0;
  e2 << 0, 1;
  const RestrictedMap m = restrict_map(a, Subspace::span(e1), Subspace::span(e2));
  CHECK(m.containment_residual < 1e-30);
  CHECK(m.rank == 1);
  CHECK_THROWS_AS(solve_restricted(a, Subspace::span(e1), Subspace::span(e1)), ContainmentViolation);
}
