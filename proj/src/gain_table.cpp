#include "expsplit/gain_table.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

#include "expsplit/errors.hpp"

namespace expsplit {

const GainRow& GainTable::at(std::uint64_t m, std::uint64_t n) const {
  if (n > m || m > window.M) throw DomainError("pair outside the gain table window");
  return rows[static_cast<std::size_t>(m * (m + 1) / 2 + n)];
}

bool GainTable::has_brackets() const {
  for (const auto& row : rows) {
    if (!row.gP.exact() || !row.qQ.exact() || (row.hB && !row.hB->exact())) return true;
  }
  return false;
}

GainTable gain_table(PairContext& ctx, const PairWindow& window, double tol, const GainOptions& options) {
  const SystemDef& sys = ctx.system();
  if (sys.dim != ctx.projection().dim) throw DimensionMismatch("system and projection dimensions differ");
  GainTable table;
  table.window = window;
  table.norm = sys.norm;
  for (std::uint64_t n = 0; n <= window.M; ++n) {
    table.p_norms.push_back(operator_norm(ctx.at(n).p, sys.norm));
    table.q_norms.push_back(operator_norm(ctx.at(n).q, sys.norm));
  }
  table.strong_failure = first_strong_invariance_failure(ctx, window, tol);
  table.strongly_invariant = !table.strong_failure.has_value();

  const auto pairs = window.pairs();
  table.rows.resize(pairs.size());
  const auto fill = [&](std::size_t i) {
    const auto [m, n] = pairs[i];
    const ScaledMatrix a = ctx.evolution(m, n);
    const ProjectorData& at_n = ctx.at(n);
    GainRow& row = table.rows[i];
    row.m = m;
    row.n = n;
    row.gP = restricted_sup_gain(a, at_n.range, sys.norm, options);
    row.qQ = restricted_inf_gain(a, at_n.kernel, sys.norm, options);
    row.GP = operator_norm(a * at_n.p, sys.norm);
    if (table.strongly_invariant) {
      const ScaledMatrix b = skew_evolution(ctx, m, n, tol);
      row.HB = operator_norm(b, sys.norm);
      row.hB = restricted_sup_gain(b, ctx.at(m).kernel, sys.norm, options);
    }
  };

  unsigned workers = options.threads != 0 ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, pairs.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < pairs.size(); ++i) fill(i);
    return table;
  }
  // Rows are independent and written in place, so the table does not depend
  // on scheduling. The first failing row in window order is rethrown.
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(pairs.size());
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < pairs.size(); i = next++) {
        try {
          fill(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return table;
}

GainTable gain_table(const SystemDef& sys, const ProjectionDef& p, const PairWindow& window, double tol,
                     const GainOptions& options) {
  PairContext ctx(sys, p);
  return gain_table(ctx, window, tol, options);
}

}  // namespace expsplit
