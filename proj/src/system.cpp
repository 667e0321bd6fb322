#include "expsplit/system.hpp"

#include <mutex>

#include "expsplit/errors.hpp"

namespace expsplit {

SystemDef explicit_system(std::vector<ScaledMatrix> steps, NormKind norm) {
  if (steps.empty()) throw ConfigError("explicit system needs at least one step matrix");
  const Index dim = steps.front().dim();
  for (const auto& s : steps) {
    if (s.dim() != dim) throw ConfigError("explicit step matrices differ in dimension");
  }
  SystemDef sys;
  sys.dim = dim;
  sys.norm = norm;
  sys.spec.matrices = steps;
  sys.rule = [steps = std::move(steps)](std::uint64_t n) { return steps[n % steps.size()]; };
  return sys;
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> PairWindow::pairs() const {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
  out.reserve(pair_count());
  for (std::uint64_t m = 0; m <= M; ++m)
    for (std::uint64_t n = 0; n <= m; ++n) out.emplace_back(m, n);
  return out;
}

ScaledMatrix step(const SystemDef& sys, std::uint64_t n) {
  if (!sys.rule) throw DomainError("system has no step rule");
  ScaledMatrix a = sys.rule(n);
  if (a.dim() != sys.dim) {
    throw DomainError("step rule returned a " + std::to_string(a.dim()) + "x" + std::to_string(a.dim()) +
                      " matrix at n = " + std::to_string(n) + ", expected dimension " + std::to_string(sys.dim));
  }
  return a;
}

ScaledMatrix evolution(const SystemDef& sys, std::uint64_t m, std::uint64_t n) {
  if (m < n) throw DomainError("evolution operator needs m >= n");
  ScaledMatrix out = ScaledMatrix::identity(sys.dim);
  for (std::uint64_t k = n; k < m; ++k) out = step(sys, k) * out;
  return out;
}

ScaledMatrix EvolutionCache::get(std::uint64_t m, std::uint64_t n) {
  if (m < n) throw DomainError("evolution operator needs m >= n");
  if (m == n) return ScaledMatrix::identity(sys_->dim);
  std::uint64_t k = n;
  ScaledMatrix current = ScaledMatrix::identity(sys_->dim);
  {
    std::shared_lock lock(mutex_);
    auto it = memo_.find({m, n});
    if (it != memo_.end()) return it->second;
    // Largest cached A_k^n with k < m.
    auto lo = memo_.lower_bound({n, n});
    auto hi = memo_.lower_bound({m, n});
    for (auto cursor = hi; cursor != lo;) {
      --cursor;
      if (cursor->first.second == n) {
        k = cursor->first.first;
        current = cursor->second;
        break;
      }
    }
  }
  std::vector<std::pair<std::uint64_t, ScaledMatrix>> computed;
  for (; k < m; ++k) {
    current = step(*sys_, k) * current;
    computed.emplace_back(k + 1, current);
  }
  std::unique_lock lock(mutex_);
  for (auto& [key_m, value] : computed) memo_.try_emplace({key_m, n}, std::move(value));
  return memo_.at({m, n});
}

std::size_t EvolutionCache::size() const {
  std::shared_lock lock(mutex_);
  return memo_.size();
}

ScaledMatrix evolution(EvolutionCache& cache, std::uint64_t m, std::uint64_t n) { return cache.get(m, n); }

CocycleResult cocycle_residual(const SystemDef& sys, const PairWindow& window) {
  EvolutionCache cache(sys);
  CocycleResult worst;
  window.for_each_triple([&](std::uint64_t m, std::uint64_t n, std::uint64_t p) {
    const ScaledMatrix composed = cache.get(m, n) * cache.get(n, p);
    const double r = relative_difference(composed, cache.get(m, p), sys.norm);
    if (r > worst.residual) worst = {r, m, n, p};
  });
  return worst;
}

ScaledMatrix inverse_evolution(const SystemDef& sys, std::uint64_t m, std::uint64_t n) {
  if (m < n) throw DomainError("evolution operator needs m >= n");
  ScaledMatrix out = ScaledMatrix::identity(sys.dim);
  for (std::uint64_t k = n; k < m; ++k) {
    const ScaledMatrix a = step(sys, k);
    if (inverse_condition(a) <= Real(kSingularStepRcond)) throw NotReversible(k);
    out = out * a.inverse(kSingularStepRcond);
  }
  return out;
}

}  // namespace expsplit
