#include <doctest.h>

#include <cmath>

#include "expsplit/builtins.hpp"
#include "expsplit/errors.hpp"
#include "generators.hpp"

using namespace expsplit;

namespace {

ProjectionDef random_projection(gen::Gen& g, Index dim, Index rank, int period) {
  std::vector<ScaledMatrix> list;
  for (int i = 0; i < period; ++i) list.emplace_back(g.projector(dim, rank));
  return explicit_projection(std::move(list));
}

}  // namespace

TEST_CASE("projection validation finds the first non-idempotent index") {
  Mat p = Mat::Zero(2, 2), bad = Mat::Identity(2, 2) * 2;
  p(0, 0) = 1;
  const ProjectionDef good = explicit_projection({ScaledMatrix(p)});
  CHECK(validate_projection(good, PairWindow{10}, 1e-9).ok);
  const ProjectionDef mixed = explicit_projection({ScaledMatrix(p), ScaledMatrix(p), ScaledMatrix(bad)});
  const IdempotencyResult r = validate_projection(mixed, PairWindow{10}, 1e-9);
  CHECK_FALSE(r.ok);
  REQUIRE(r.witness);
  CHECK(*r.witness == 2);
  CHECK(r.residual == doctest::Approx(0.5));  // ||4I - 2I|| / ||4I||
  CHECK(complement(good, 3).entry(1, 1) == 1);
}

TEST_CASE("corpus projections are projectors") {
  for (const char* name : {"example11_r3", "example2_r2", "example4_block"}) {
    CAPTURE(name);
    CHECK(validate_projection(builtin_projection(name), PairWindow{40}, 1e-9).ok);
  }
  // ||P_n||_sup = 2^{n^2} for the Example 2 family, 2^n for Example 4.
  const ProjectionDef p2 = builtin_projection("example2_r2");
  const ProjectionDef p4 = builtin_projection("example4_block");
  for (std::uint64_t n : {0u, 1u, 5u, 40u}) {
    CHECK(operator_norm(projection(p2, n), NormKind::sup).log2() == doctest::Approx(double(n * n)));
    CHECK(operator_norm(projection(p4, n), NormKind::sup).log2() == doctest::Approx(double(n)));
  }
}

TEST_CASE("shared range variants") {
  const ProjectionDef p = builtin_projection("example4_block");
  const ProjectionDef same = shared_range_variant(p, 3, 0.0);
  for (std::uint64_t n = 0; n <= 10; ++n) CHECK(projection(same, n).same_representation(projection(p, n)));
  const SharedRangeResiduals r = shared_range_identities(p, shared_range_variant(p, 5), PairWindow{10}, 1e-9);
  CHECK(r.max() <= 1e-9);
}

TEST_CASE("property: shared range variants are idempotent with the same range") {
  gen::for_all(31, 100, [](gen::Gen& g, int i) {
    CAPTURE(i);
    const Index dim = g.integer(2, 6);
    const ProjectionDef p = random_projection(g, dim, g.integer(1, static_cast<int>(dim) - 1), 2);
    const ProjectionDef r = shared_range_variant(p, static_cast<std::uint64_t>(i));
    const PairWindow w{4};
    CHECK(validate_projection(r, w, 1e-9).residual <= 1e-10);
    CHECK(shared_range_identities(p, r, w, 1e-9).max() <= 1e-9);
  });
}

TEST_CASE("shared range identities reject different ranges") {
  Mat a = Mat::Zero(2, 2), b = Mat::Zero(2, 2);
  a(0, 0) = 1;
  b(1, 1) = 1;
  CHECK_THROWS_AS(shared_range_identities(explicit_projection({ScaledMatrix(a)}),
                                          explicit_projection({ScaledMatrix(b)}), PairWindow{3}, 1e-9),
                  RangeMismatch);
}

TEST_CASE("exponential bounds on projector norms") {
  const ProjectionDef p4 = builtin_projection("example4_block");
  CHECK(exp_bound_certify(p4, {0.0, 1.0}, PairWindow{40}, NormKind::sup).ok);
  const ExpBoundCheck tight = exp_bound_certify(p4, {0.0, 0.9}, PairWindow{40}, NormKind::sup);
  CHECK_FALSE(tight.ok);
  REQUIRE(tight.witness);
  CHECK(*tight.witness == 1);

  const ExpBoundFit fit4 = exp_bound_fit(p4, PairWindow{40}, NormKind::sup);
  CHECK(fit4.trend == Trend::exponential);
  CHECK(fit4.cert.log2_M == doctest::Approx(0.0));
  CHECK(fit4.cert.log2_p == doctest::Approx(1.0));
  CHECK(fit4.slope == doctest::Approx(1.0));

  const ExpBoundFit fit2 = exp_bound_fit(builtin_projection("example2_r2"), PairWindow{20}, NormKind::sup);
  CHECK(fit2.trend == Trend::superexponential);
  CHECK(fit2.curvature == doctest::Approx(1.0));

  Mat fixed = Mat::Zero(2, 2);
  fixed(0, 0) = 1;
  fixed(0, 1) = 3;
  const ExpBoundFit flat = exp_bound_fit(explicit_projection({ScaledMatrix(fixed)}), PairWindow{20}, NormKind::sup);
  CHECK(flat.trend == Trend::bounded);
  CHECK(flat.cert.log2_M == doctest::Approx(2.0));
  CHECK(flat.cert.log2_p == 0.0);
}

TEST_CASE("property: fitted exponential bounds certify on their window") {
  gen::for_all(32, 20, [](gen::Gen& g, int i) {
    CAPTURE(i);
    const Index dim = g.integer(2, 4);
    const ProjectionDef p = random_projection(g, dim, 1, 3);
    const PairWindow w{12};
    for (NormKind norm : {NormKind::sup, NormKind::one, NormKind::two}) {
      const ExpBoundFit fit = exp_bound_fit(p, w, norm);
      CHECK(exp_bound_certify(p, fit.cert, w, norm).ok);
    }
  });
}
