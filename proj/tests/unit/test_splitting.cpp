#include <doctest.h>

#include <cmath>
#include <map>

#include "expsplit/corpus.hpp"
#include "expsplit/errors.hpp"
#include "generators.hpp"

using namespace expsplit;

namespace {

Certificate make(Concept c, double N, double lc, double la, double lb, CertForm form = CertForm::restricted) {
  return {c, N, lc, la, lb, form};
}

const GainTable& table_of(const std::string& name, std::uint64_t M) {
  static std::map<std::pair<std::string, std::uint64_t>, GainTable> cache;
  static std::map<std::string, CorpusEntry> entries;
  const auto key = std::make_pair(name, M);
  auto it = cache.find(key);
  if (it == cache.end()) {
    auto& e = entries.try_emplace(name, builtin(name)).first->second;
    it = cache.emplace(key, gain_table(e.system, e.projection, PairWindow{M}, 1e-9)).first;
  }
  return it->second;
}

}  // namespace

TEST_CASE("certificate constraints") {
  CHECK_NOTHROW(validate(make(Concept::ES, 0, 1, -1, 1)));
  CHECK_THROWS_AS(validate(make(Concept::ES, 0, 1, 1, 1)), ConfigError);      // a < b
  CHECK_THROWS_AS(validate(make(Concept::ES, -1, 0, 0, 1)), ConfigError);     // N >= 1
  CHECK_THROWS_AS(validate(make(Concept::ES, 0, -0.5, 0, 1)), ConfigError);   // c >= 1
  CHECK_THROWS_AS(validate(make(Concept::UES, 0, 1, 0, 1)), ConfigError);     // uniform: c = 1
  CHECK_THROWS_AS(validate(make(Concept::ED, 0, 0, 0.5, 1)), ConfigError);    // dichotomy: a < 1 < b
  CHECK_THROWS_AS(validate(make(Concept::SES, 0, 0, 0, 1)), ConfigError);     // strong concept, restricted form
  CHECK_NOTHROW(validate(make(Concept::USED, 0, 0, -1, 1, CertForm::strong)));
  CHECK(parse_concept("uses") == Concept::USES);
  CHECK_THROWS_AS(parse_concept("XES"), ConfigError);
}

TEST_CASE("implication structure of the concepts") {
  for (Concept c : kAllConcepts) {
    CHECK(restricted_counterpart(strong_counterpart(c)) == restricted_counterpart(c));
    CHECK(is_strong(strong_counterpart(c)));
    CHECK(is_uniform(restricted_counterpart(c)) == is_uniform(c));
    CHECK(implies(c, Concept::ES));
    CHECK(implies(Concept::USED, c));
  }
  CHECK_FALSE(implies(Concept::ES, Concept::UES));
  CHECK_FALSE(implies(Concept::UES, Concept::ED));
  CHECK(diagram_arrows().size() == 12);
}

TEST_CASE("dichotomy normal form") {
  // d = max(a, 1/b) bounds both parts.
  CHECK(dichotomy_normal_form(make(Concept::ED, 0, 0, -1, 2)).log2_d == -1.0);
  CHECK(dichotomy_normal_form(make(Concept::ED, 0, 0, -2, 1)).log2_d == -1.0);
  CHECK(dichotomy_normal_form(make(Concept::UED, 0, 0, std::log2(0.9), std::log2(1.1))).log2_d ==
        doctest::Approx(-std::log2(1.1)));
  CHECK_THROWS_AS(dichotomy_normal_form(make(Concept::ES, 0, 0, 0.5, 1)), DomainError);
  const Certificate back = from_dichotomy_form({1, 0, std::log2(0.99)}, Concept::UED, CertForm::restricted);
  CHECK(back.log2_a == doctest::Approx(std::log2(0.99)));
  CHECK(back.log2_b == doctest::Approx(-std::log2(0.99)));
}

TEST_CASE("property: dichotomy normal form keeps every inequality") {
  const GainTable& t = table_of("example4_block", 12);
  gen::for_all(41, 40, [&](gen::Gen& g, int i) {
    CAPTURE(i);
    const Certificate c = make(Concept::ED, g.uniform(0, 8), g.uniform(0, 3), g.uniform(-2, -0.01), g.uniform(0.01, 2));
    const bool es = verify_certificate(t, c).ok;
    if (es) CHECK(verify_dichotomy(t, dichotomy_normal_form(c)).ok);
  });
}

TEST_CASE("exponential form round trip") {
  gen::for_all(42, 20, [](gen::Gen& g, int i) {
    CAPTURE(i);
    const Certificate c = make(Concept::ES, g.uniform(0, 5), g.uniform(0, 2), g.uniform(-3, 0), g.uniform(0, 3));
    const ExponentialForm e = exponential_form(c);
    CHECK(e.alpha < e.beta);
    CHECK(e.gamma >= 0);
    const Certificate back = from_exponential_form(e, c.notion, c.form);
    CHECK(back.log2_N == doctest::Approx(c.log2_N));
    CHECK(back.log2_c == doctest::Approx(c.log2_c));
    CHECK(back.log2_a == doctest::Approx(c.log2_a));
    CHECK(back.log2_b == doctest::Approx(c.log2_b));
  });
}

TEST_CASE("strengthen, weaken and transport constants") {
  const Certificate es = make(Concept::ES, 1, 0.5, -1, 1);
  const Certificate ses = strengthen(es, {2, 0.25});
  CHECK(ses.notion == Concept::SES);
  CHECK(ses.form == CertForm::strong);
  CHECK(ses.log2_N == 3);
  CHECK(ses.log2_c == 0.75);
  const Weakened w = weaken(ses);
  CHECK(w.cert.notion == Concept::ES);
  CHECK(w.bound.log2_M == 3);
  CHECK(w.bound.log2_p == 0.75);
  const Certificate moved = transport_projection(es, {2, 0.25});
  CHECK(moved.log2_N == 1 + 2 + 4);  // 4 M^2 N
  CHECK(moved.log2_c == 1.0);        // p^2 c
  CHECK(transport_projection(make(Concept::UES, 0, 0, -1, 1), {1, 1}).notion == Concept::ES);
  CHECK(transport_projection(make(Concept::UES, 0, 0, -1, 1), {1, 0}).notion == Concept::UES);
  CHECK_THROWS_AS(strengthen(ses, {0, 0}), DomainError);
  CHECK_THROWS_AS(weaken(es), DomainError);
}

TEST_CASE("find_violation oracles") {
  // Example 3: log2 gP(2k+2, 2k+1) = (4k+1)/3 first exceeds log2 100 at k = 5.
  const GainTable& t3 = table_of("example3_r2", 20);
  auto w = find_violation(t3, make(Concept::UES, std::log2(100.0), 0, 0, 2));
  REQUIRE(w);
  CHECK(w->m == 12);
  CHECK(w->n == 11);
  CHECK(w->tag == Inequality::es1);
  CHECK(w->lhs.log2() == doctest::Approx(7.0));
  w = find_violation(t3, make(Concept::UES, std::log2(100.0), 0, 1, 2));
  REQUIRE(w);
  CHECK(w->m == 14);
  CHECK(w->n == 13);

  // Example 2: 2^{m-n} > 10^6 0.99^{m-n} first at m - n = 20.
  const GainTable& t2 = table_of("example2_r2", 24);
  const Certificate ued = from_dichotomy_form({std::log2(1e6), 0, std::log2(0.99)}, Concept::UED, CertForm::restricted);
  w = find_violation(t2, ued);
  REQUIRE(w);
  CHECK(w->m == 20);
  CHECK(w->n == 0);
  CHECK_FALSE(find_violation(t2, make(Concept::UES, 0, 0, 1, 2)));
}

TEST_CASE("property: witnesses are stable under window growth") {
  gen::for_all(43, 30, [](gen::Gen& g, int i) {
    CAPTURE(i);
    const Certificate c = make(Concept::ES, g.uniform(0, 6), g.uniform(0, 1.5), g.uniform(-1, 1), g.uniform(1, 3));
    const auto small = find_violation(table_of("example3_r2", 14), c);
    const auto large = find_violation(table_of("example3_r2", 30), c);
    if (small) {
      REQUIRE(large);
      CHECK(large->m == small->m);
      CHECK(large->n == small->n);
    }
    if (!large) CHECK_FALSE(small);
    CHECK(verify_certificate(table_of("example3_r2", 30), c).ok == !large.has_value());
  });
}

TEST_CASE("property: fitted certificates re-verify") {
  for (const auto& name : corpus_names()) {
    CAPTURE(name);
    const CorpusEntry e = builtin(name);
    const GainTable t = gain_table(e.system, e.projection, PairWindow{std::min<std::uint64_t>(e.default_window.M, 20)}, 1e-9);
    for (Concept c : kAllConcepts) {
      if (is_strong(c) && !t.has_skew_columns()) continue;
      CAPTURE(to_string(c));
      const FitResult fit = fit_certificate(t, c);
      if (fit.status != FitStatus::feasible) continue;
      REQUIRE(fit.cert);
      CHECK_NOTHROW(validate(*fit.cert));
      CHECK(verify_certificate(t, *fit.cert).ok);
    }
  }
}

TEST_CASE("Example 3 fits") {
  const GainTable& t = table_of("example3_r2", 40);
  const FitResult es = fit_certificate(t, Concept::ES);
  REQUIRE(es.status == FitStatus::feasible);
  CHECK(es.cert->log2_c >= 0.55);
  CHECK(es.cert->log2_c <= 0.75);
  CHECK(es.cert->log2_a >= -0.40);
  CHECK(es.cert->log2_a <= -0.28);
  const FitResult ues = fit_certificate(t, Concept::UES, 1e3);
  CHECK(ues.status == FitStatus::infeasible);
  CHECK_FALSE(ues.binding.empty());
  CHECK(ues.infeasibility > 0);
}

TEST_CASE("strong certificates need the skew columns") {
  const GainTable& t = table_of("example11_r3", 6);
  CHECK_FALSE(t.has_skew_columns());
  CHECK_THROWS_AS(verify_certificate(t, make(Concept::SES, 0, 0, 0, 3, CertForm::strong)), MissingColumn);
}

TEST_CASE("kernel injectivity") {
  for (const char* name : {"example2_r2", "example3_r2", "example4_block"}) {
    CAPTURE(name);
    const CorpusEntry e = builtin(name);
    PairContext ctx(e.system, e.projection);
    for (const auto& row : kernel_injectivity_check(ctx, PairWindow{12})) CHECK(row.injective);
  }
}

TEST_CASE("reversible equivalence on random systems") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    CAPTURE(seed);
    const CorpusEntry e = random_reversible(seed, 2 + static_cast<Index>(seed % 3));
    const ReversibleEquivalence r = reversible_es2_equiv(e.system, e.projection, PairWindow{8});
    CHECK(r.full_norm <= 1e-8);
    CHECK(r.restricted <= 1e-8);
    CHECK(r.operator_residual <= 1e-8);
  }
  const CorpusEntry r3 = builtin("example11_r3");
  CHECK_THROWS(reversible_es2_equiv(r3.system, r3.projection, PairWindow{4}));
}
