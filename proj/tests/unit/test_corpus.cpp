#include <doctest.h>

#include "expsplit/builtins.hpp"
#include "expsplit/errors.hpp"
#include "expsplit/serialize.hpp"

using namespace expsplit;

TEST_CASE("corpus expectations reproduce") {
  for (const auto& name : corpus_names()) {
    CAPTURE(name);
    const CorpusEntry e = builtin(name);
    const AnalysisReport report = classify(e.system, e.projection, default_options(e));
    CHECK(report.internal_errors.empty());
    CHECK(diagram_violations(report.verdicts).empty());
    for (const auto& o : check_expectations(e, &report)) {
      INFO(o.expectation.label() << ": expected " << o.expectation.expected << ", observed " << o.observed);
      CHECK(o.passed);
    }
    for (const Certificate& cert : e.reference_certificates) {
      REQUIRE(report.table);
      const VerifyResult v = verify_certificate(*report.table, cert);
      CHECK(v.ok);
      CHECK_FALSE(v.inconclusive);
    }
  }
}

TEST_CASE("corpus parameters") {
  CHECK_THROWS_AS(builtin("no_such_entry"), ConfigError);
  CHECK_THROWS_AS(builtin("example2_r2", {{"blocks", 2}}), ConfigError);
  CHECK_THROWS_AS(builtin("example4_block", {{"blocks", 0}}), ConfigError);
  CHECK(builtin("example4_block", {{"blocks", 3}}).system.dim == 6);
  const CorpusEntry r = builtin("random_reversible", {{"seed", 7}, {"dim", 4}, {"window", 6}});
  CHECK(r.system.dim == 4);
  CHECK(r.default_window.M == 6);
}

TEST_CASE("random reversible generators are pure in the seed") {
  const CorpusEntry a = random_reversible(9, 3), b = random_reversible(9, 3), c = random_reversible(10, 3);
  for (std::uint64_t n = 0; n < 5; ++n) {
    CHECK(step(a.system, n).same_representation(step(b.system, n)));
    CHECK(projection(a.projection, n).same_representation(projection(b.projection, n)));
  }
  CHECK_FALSE(step(a.system, 0).same_representation(step(c.system, 0)));
}

TEST_CASE("block reduction soundness") {
  const CorpusEntry one = builtin("example4_block");
  const GainTable base = gain_table(one.system, one.projection, PairWindow{10}, 1e-9);
  for (int d = 2; d <= 3; ++d) {
    CAPTURE(d);
    const CorpusEntry e = builtin("example4_block", {{"blocks", double(d)}});
    const GainTable t = gain_table(e.system, e.projection, PairWindow{10}, 1e-9);
    REQUIRE(t.rows.size() == base.rows.size());
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      CHECK(t.rows[i].gP.exact());
      CHECK(t.rows[i].gP.upper.log2() == doctest::Approx(base.rows[i].gP.upper.log2()).epsilon(1e-12));
      CHECK(t.rows[i].qQ.lower.log2() == doctest::Approx(base.rows[i].qQ.lower.log2()).epsilon(1e-12));
      CHECK(t.rows[i].GP.log2() == doctest::Approx(base.rows[i].GP.log2()).epsilon(1e-12));
      REQUIRE(t.rows[i].HB);
      CHECK(t.rows[i].HB->log2() == doctest::Approx(base.rows[i].HB->log2()).epsilon(1e-12));
    }
  }
}

TEST_CASE("corpus entries export to definitions and load back") {
  for (const auto& name : corpus_names()) {
    CAPTURE(name);
    const CorpusEntry e = builtin(name);
    const Json j = corpus_entry_to_json(e);
    const Definition def = definition_from_json(Json::parse(j.dump()));
    CHECK(def.name == name);
    REQUIRE(def.window);
    CHECK(def.window->M == e.default_window.M);
    CHECK(def.system.norm == e.system.norm);
    for (std::uint64_t n : {0u, 1u, 2u, 7u, 19u}) {
      CHECK(step(def.system, n).same_representation(step(e.system, n)));
      CHECK(projection(def.projection, n).same_representation(projection(e.projection, n)));
    }
  }
}
