#include <doctest.h>

#include <algorithm>
#include <thread>

#include "expsplit/builtins.hpp"
#include "expsplit/errors.hpp"
#include "generators.hpp"

using namespace expsplit;

namespace {

SystemDef random_system(gen::Gen& g, Index dim, int period) {
  std::vector<ScaledMatrix> steps;
  for (int i = 0; i < period; ++i) steps.emplace_back(g.invertible(dim));
  return explicit_system(std::move(steps), NormKind::sup);
}

}  // namespace

TEST_CASE("window pairs are in ascending (m, n) order") {
  const PairWindow w{2};
  const std::vector<std::pair<std::uint64_t, std::uint64_t>> expected = {{0, 0}, {1, 0}, {1, 1},
                                                                         {2, 0}, {2, 1}, {2, 2}};
  CHECK(w.pairs() == expected);
  CHECK(w.pair_count() == 6);
  int triples = 0;
  w.for_each_triple([&](auto, auto, auto) { ++triples; });
  CHECK(triples == 10);
}

TEST_CASE("evolution operators") {
  const SystemDef sys = builtin_system("identity", {{"dim", 3}});
  CHECK(evolution(sys, 5, 5).same_representation(ScaledMatrix::identity(3)));
  CHECK(evolution(sys, 9, 2).same_representation(ScaledMatrix::identity(3)));
  CHECK_THROWS_AS(evolution(sys, 1, 2), DomainError);

  Mat two = Mat::Identity(2, 2) * 2;
  const SystemDef doubling = explicit_system({ScaledMatrix(two)}, NormKind::sup);
  CHECK(operator_norm(evolution(doubling, 1000, 0), NormKind::sup).log2() == 1000.0);
}

TEST_CASE("explicit step lists repeat periodically") {
  Mat a = Mat::Identity(2, 2), b = Mat::Identity(2, 2);
  a(0, 1) = 1;
  b(1, 0) = 1;
  const SystemDef sys = explicit_system({ScaledMatrix(a), ScaledMatrix(b)}, NormKind::sup);
  CHECK(step(sys, 0).same_representation(ScaledMatrix(a)));
  CHECK(step(sys, 7).same_representation(ScaledMatrix(b)));
  CHECK_THROWS_AS(explicit_system({}, NormKind::sup), ConfigError);
}

TEST_CASE("inverse evolution and singular steps") {
  gen::for_all(21, 10, [](gen::Gen& g, int i) {
    CAPTURE(i);
    const SystemDef sys = random_system(g, g.integer(2, 4), 3);
    const ScaledMatrix product = inverse_evolution(sys, 7, 2) * evolution(sys, 7, 2);
    CHECK(relative_difference(product, ScaledMatrix::identity(sys.dim), NormKind::sup) < 1e-60);
  });
  // a_0 = 0 makes A_0 of the R^3 example singular.
  const SystemDef r3 = builtin_system("example11_r3");
  CHECK_THROWS_AS(inverse_evolution(r3, 3, 0), NotReversible);
  try {
    inverse_evolution(r3, 3, 0);
  } catch (const NotReversible& e) {
    CHECK(e.index() == 0);
  }
  CHECK_NOTHROW(inverse_evolution(r3, 3, 1));
}

TEST_CASE("property: cocycle identity on random systems") {
  gen::for_all(22, 10, [](gen::Gen& g, int i) {
    CAPTURE(i);
    const SystemDef sys = random_system(g, g.integer(1, 5), g.integer(1, 4));
    CHECK(cocycle_residual(sys, PairWindow{12}).residual <= 1e-9);
  });
}

TEST_CASE("evolution cache matches direct products under concurrent access") {
  gen::Gen g(23, 0);
  const SystemDef sys = random_system(g, 3, 5);
  const PairWindow w{24};
  auto pairs = w.pairs();
  EvolutionCache cache(sys);
  std::vector<std::thread> threads;
  std::vector<int> mismatches(8, 0);
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&, t] {
      auto order = pairs;
      std::shuffle(order.begin(), order.end(), std::mt19937_64(static_cast<std::uint64_t>(t)));
      for (const auto& [m, n] : order) {
        if (!cache.get(m, n).same_representation(evolution(sys, m, n))) ++mismatches[static_cast<std::size_t>(t)];
      }
    });
  }
  for (auto& t : threads) t.join();
  for (int count : mismatches) CHECK(count == 0);
  CHECK(cache.size() == w.pair_count() - (w.M + 1));
}

TEST_CASE("steps of the wrong size are rejected") {
  SystemDef sys = builtin_system("identity", {{"dim", 2}});
  sys.dim = 3;
  CHECK_THROWS_AS(step(sys, 0), DomainError);
  CHECK_THROWS_AS(builtin_system("no_such_system"), ConfigError);
  CHECK_THROWS_AS(builtin_system("identity", {{"dim", 0}}), ConfigError);
}
