#include <doctest.h>

#include "expsplit/builtins.hpp"
#include "expsplit/corpus.hpp"
#include "expsplit/errors.hpp"

using namespace expsplit;

TEST_CASE("R^3 example is invariant but not strongly invariant") {
  const SystemDef sys = builtin_system("example11_r3");
  const ProjectionDef p = builtin_projection("example11_r3");
  const InvarianceResult inv = invariance_check(sys, p, PairWindow{40}, 1e-9);
  CHECK(inv.ok);
  CHECK(inv.residual <= 1e-10);

  const IsoReport r = strong_invariance_check(sys, p, 1, 0, 1e-9);
  CHECK(r.verdict == IsoVerdict::dim_mismatch);
  CHECK(r.dim_ker_n == 1);
  CHECK(r.dim_ker_m == 2);
  CHECK(strong_invariance_check(sys, p, 3, 1, 1e-9).is_iso());
  CHECK(strong_invariance_check(sys, p, 0, 0, 1e-9).is_iso());

  PairContext ctx(sys, p);
  const auto first = first_strong_invariance_failure(ctx, PairWindow{10}, 1e-9);
  REQUIRE(first);
  CHECK(first->m == 1);
  CHECK(first->n == 0);
  CHECK_THROWS_AS(skew_evolution(sys, p, 1, 0, 1e-9), NotStronglyInvariant);
  CHECK_THROWS_AS(skew_identity_suite(sys, p, PairWindow{5}, 1e-9), NotStronglyInvariant);
}

TEST_CASE("non-invariant projections are reported with the first index") {
  Mat a = Mat::Zero(2, 2), b = Mat::Zero(2, 2);
  a(0, 0) = 1;
  b(1, 1) = 1;
  const SystemDef sys = builtin_system("identity", {{"dim", 2}});
  const ProjectionDef p = explicit_projection({ScaledMatrix(a), ScaledMatrix(a), ScaledMatrix(b)});
  const InvarianceResult r = invariance_check(sys, p, PairWindow{6}, 1e-9);
  CHECK_FALSE(r.ok);
  REQUIRE(r.witness);
  CHECK(*r.witness == 1);
}

TEST_CASE("a non-injective restriction is not an isomorphism") {
  Mat step = Mat::Zero(2, 2), p = Mat::Zero(2, 2);
  step(0, 0) = 1;
  p(0, 0) = 1;
  // A = P kills Ker P, so A|Ker P -> Ker P is the zero map.
  const SystemDef sys = explicit_system({ScaledMatrix(step)}, NormKind::sup);
  const ProjectionDef proj = explicit_projection({ScaledMatrix(p)});
  CHECK(invariance_check(sys, proj, PairWindow{4}, 1e-9).ok);
  const IsoReport r = strong_invariance_check(sys, proj, 2, 1, 1e-9);
  CHECK(r.verdict == IsoVerdict::not_injective);
  CHECK(r.rank == 0);
}

TEST_CASE("Example 2 skew evolution") {
  const CorpusEntry e = builtin("example2_r2");
  PairContext ctx(e.system, e.projection);
  for (std::uint64_t m = 0; m <= 8; ++m) {
    for (std::uint64_t n = 0; n <= m; ++n) {
      CAPTURE(m);
      CAPTURE(n);
      const ScaledMatrix b = skew_evolution(ctx, m, n, 1e-9);
      const ScaledMatrix expected = ctx.at(n).q.scaled(Real(1), -2 * static_cast<std::int64_t>(m - n));
      CHECK(relative_difference(b, expected, NormKind::sup) <= 1e-30);
    }
  }
  const SkewResiduals r = skew_identity_suite(e.system, e.projection, PairWindow{10}, 1e-9);
  CHECK(r.max() <= 1e-9);
}

TEST_CASE("skew identities on random reversible systems") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    CAPTURE(seed);
    const CorpusEntry e = random_reversible(seed, 2 + static_cast<Index>(seed % 3));
    CHECK(invariance_check(e.system, e.projection, PairWindow{10}, 1e-9).ok);
    CHECK(skew_identity_suite(e.system, e.projection, PairWindow{8}, 1e-9).max() <= 1e-9);
  }
}

TEST_CASE("pair context caches projector data") {
  const CorpusEntry e = builtin("example4_block");
  PairContext ctx(e.system, e.projection);
  const ProjectorData& first = ctx.at(7);
  const ProjectorData& again = ctx.at(7);
  CHECK(&first == &again);
  CHECK(first.range.dim() == 1);
  CHECK(first.kernel.dim() == 1);
}
