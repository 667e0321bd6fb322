#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include "expsplit/scaled_matrix.hpp"

namespace expsplit {

using Params = std::map<std::string, double>;
using MatrixRule = std::function<ScaledMatrix(std::uint64_t)>;

/// How a matrix sequence was defined; kept for reports and serialization.
struct RuleSpec {
  std::string builtin;                 // empty for explicit lists
  Params params;
  std::vector<ScaledMatrix> matrices;  // explicit list, repeated periodically
  std::shared_ptr<const RuleSpec> base;  // input sequence of derived rules
};

/// Rule-based sequence n -> A_n of dim x dim matrices.
struct SystemDef {
  Index dim = 0;
  NormKind norm = NormKind::sup;
  RuleSpec spec;
  MatrixRule rule;
  std::optional<bool> reversible_hint;
};

/// A_n = steps[n mod steps.size()].
SystemDef explicit_system(std::vector<ScaledMatrix> steps, NormKind norm);

/// Pairs 0 <= n <= m <= M in ascending (m, then n) order.
struct PairWindow {
  std::uint64_t M = 0;

  std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs() const;
  std::size_t pair_count() const { return static_cast<std::size_t>((M + 1) * (M + 2) / 2); }

  template <typename F>
  void for_each_triple(F&& f) const {
    for (std::uint64_t m = 0; m <= M; ++m)
      for (std::uint64_t n = 0; n <= m; ++n)
        for (std::uint64_t p = 0; p <= n; ++p) f(m, n, p);
  }
};

/// A_n; throws DomainError if the rule yields a matrix of the wrong size.
ScaledMatrix step(const SystemDef& sys, std::uint64_t n);

/// Thread-safe memo of evolution operators A_m^n for one system.
///
/// Every A_m^n is formed as step(m-1) * A_{m-1}^n starting from A_n^n = I, so
/// cached and uncached results agree bit for bit.
class EvolutionCache {
 public:
  explicit EvolutionCache(const SystemDef& sys) : sys_(&sys) {}
  EvolutionCache(const EvolutionCache&) = delete;
  EvolutionCache& operator=(const EvolutionCache&) = delete;

  const SystemDef& system() const { return *sys_; }
  ScaledMatrix get(std::uint64_t m, std::uint64_t n);
  std::size_t size() const;

 private:
  const SystemDef* sys_;
  mutable std::shared_mutex mutex_;
  std::map<std::pair<std::uint64_t, std::uint64_t>, ScaledMatrix> memo_;
};

/// A_m^n = A_{m-1} ... A_n, A_n^n = I. Throws DomainError when m < n.
ScaledMatrix evolution(const SystemDef& sys, std::uint64_t m, std::uint64_t n);
ScaledMatrix evolution(EvolutionCache& cache, std::uint64_t m, std::uint64_t n);

struct CocycleResult {
  double residual = 0.0;  // max relative residual
  std::uint64_t m = 0, n = 0, p = 0;
};

/// max over window triples of ||A_m^n A_n^p - A_m^p|| / ||A_m^p||.
CocycleResult cocycle_residual(const SystemDef& sys, const PairWindow& window);

/// Reciprocal condition below which a step counts as singular.
inline constexpr double kSingularStepRcond = 1e-12;

/// (A_m^n)^{-1} = A_n^{-1} ... A_{m-1}^{-1}; NotReversible(k) names the first
/// singular step.
ScaledMatrix inverse_evolution(const SystemDef& sys, std::uint64_t m, std::uint64_t n);

}  // namespace expsplit
