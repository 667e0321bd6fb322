#include "expsplit/splitting.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "expsplit/errors.hpp"
#include "expsplit/lp.hpp"

namespace expsplit {

std::string_view to_string(Inequality tag) {
  switch (tag) {
    case Inequality::es1: return "es1";
    case Inequality::es2: return "es2";
    case Inequality::es2pp: return "es2pp";
    case Inequality::ses1: return "ses1";
    case Inequality::ses2: return "ses2";
    case Inequality::ed1: return "ed1";
    case Inequality::ed2: return "ed2";
    case Inequality::res2: return "res2";
  }
  return "es1";
}

std::string_view to_string(FitStatus s) {
  switch (s) {
    case FitStatus::feasible: return "feasible";
    case FitStatus::infeasible: return "infeasible";
    case FitStatus::inconclusive: return "inconclusive";
  }
  return "infeasible";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// One window inequality lhs <= rhs whose sides may be brackets. `lhs_hi` and
// `rhs_lo` are the conservative ends, `lhs_lo` and `rhs_hi` the optimistic ones.
struct Comparison {
  Inequality tag;
  double lhs_lo, lhs_hi, rhs_lo, rhs_hi;
};

void record(VerifyResult& result, std::uint64_t m, std::uint64_t n, const Comparison& c, double tol) {
  const double slack = c.rhs_lo - c.lhs_hi;
  if (std::isfinite(slack)) result.min_slack = std::min(result.min_slack, slack);
  if (c.lhs_lo > c.rhs_hi + tol) {
    result.ok = false;
    if (!result.witness) {
      result.witness = ViolationWitness{m, n, c.tag, LogScalar::from_log2(c.lhs_lo), LogScalar::from_log2(c.rhs_hi)};
    }
  } else if (c.lhs_hi > c.rhs_lo + tol) {
    result.ok = false;
    result.inconclusive = true;
    if (!result.undecided) {
      result.undecided = ViolationWitness{m, n, c.tag, LogScalar::from_log2(c.lhs_hi), LogScalar::from_log2(c.rhs_lo)};
    }
  }
}

void finish(VerifyResult& result) {
  if (result.witness) result.inconclusive = false;
}

double affine(double N, double c, double slope, std::uint64_t k, std::uint64_t steps) {
  return N + static_cast<double>(k) * c + static_cast<double>(steps) * slope;
}

}  // namespace

VerifyResult verify_certificate(const GainTable& table, const Certificate& cert, double tol) {
  if (cert.form == CertForm::strong && !table.has_skew_columns()) {
    throw MissingColumn("strong-form verification needs the ||B Q|| column (projections are not strongly invariant)");
  }
  VerifyResult result;
  for (const GainRow& row : table.rows) {
    const std::uint64_t m = row.m, n = row.n, k = m - n;
    const double first_rhs = affine(cert.log2_N, cert.log2_c, cert.log2_a, n, k);
    const double growth = static_cast<double>(k) * cert.log2_b;
    const double second_rhs = cert.log2_N + static_cast<double>(m) * cert.log2_c;
    if (cert.form == CertForm::restricted) {
      record(result, m, n, {Inequality::es1, row.gP.lower.log2(), row.gP.upper.log2(), first_rhs, first_rhs}, tol);
      if (row.hB) {
        record(result, m, n,
               {Inequality::es2pp, growth + row.hB->lower.log2(), growth + row.hB->upper.log2(), second_rhs,
                second_rhs},
               tol);
      } else {
        record(result, m, n,
               {Inequality::es2, growth, growth, second_rhs + row.qQ.lower.log2(), second_rhs + row.qQ.upper.log2()},
               tol);
      }
    } else {
      record(result, m, n, {Inequality::ses1, row.GP.log2(), row.GP.log2(), first_rhs, first_rhs}, tol);
      const double lhs = growth + row.HB->log2();
      record(result, m, n, {Inequality::ses2, lhs, lhs, second_rhs, second_rhs}, tol);
    }
  }
  finish(result);
  return result;
}

std::optional<ViolationWitness> find_violation(const GainTable& table, const Certificate& cert, double tol) {
  return verify_certificate(table, cert, tol).witness;
}

VerifyResult verify_dichotomy(const GainTable& table, const DichotomyForm& d, double tol) {
  VerifyResult result;
  for (const GainRow& row : table.rows) {
    const std::uint64_t m = row.m, n = row.n, k = m - n;
    const double first_rhs = affine(d.log2_N, d.log2_c, d.log2_d, n, k);
    record(result, m, n, {Inequality::ed1, row.gP.lower.log2(), row.gP.upper.log2(), first_rhs, first_rhs}, tol);
    const double growth = -static_cast<double>(k) * d.log2_d;
    const double second_rhs = d.log2_N + static_cast<double>(m) * d.log2_c;
    if (row.hB) {
      record(result, m, n,
             {Inequality::ed2, growth + row.hB->lower.log2(), growth + row.hB->upper.log2(), second_rhs, second_rhs},
             tol);
    } else {
      record(result, m, n,
             {Inequality::ed2, growth, growth, second_rhs + row.qQ.lower.log2(), second_rhs + row.qQ.upper.log2()},
             tol);
    }
  }
  finish(result);
  return result;
}

namespace {

constexpr double kRateGap = 1e-6;
constexpr double kBox = 1e4;
constexpr double kFitMargin = 1e-9;

// Variables x = (log2 N, log2 c, log2 a, log2 b).
struct FitRow {
  lp::Constraint row;
  std::uint64_t m, n;
  Inequality tag;
};

Eigen::VectorXd vec4(double a, double b, double c, double d) {
  Eigen::VectorXd v(4);
  v << a, b, c, d;
  return v;
}

// Window rows for the concept's form; `conservative` picks the bracket end.
// Returns false (and fills `blocked`) when some row can never hold.
bool data_rows(const GainTable& table, Concept notion, bool conservative, std::vector<FitRow>& rows,
               std::optional<FitRow>& blocked) {
  const bool strong = is_strong(notion);
  if (strong && !table.has_skew_columns()) {
    throw MissingColumn("strong concepts need the ||B Q|| column (projections are not strongly invariant)");
  }
  for (const GainRow& r : table.rows) {
    const auto m = static_cast<double>(r.m), n = static_cast<double>(r.n), k = m - n;
    // N + n c + k a >= gain
    const double g = strong ? r.GP.log2() : (conservative ? r.gP.upper : r.gP.lower).log2();
    if (g > -kInf) {
      rows.push_back({{vec4(-1, -n, -k, 0), -g}, r.m, r.n, strong ? Inequality::ses1 : Inequality::es1});
    }
    if (strong || r.hB) {
      // k b + h <= N + m c
      const double h = strong ? r.HB->log2() : (conservative ? r.hB->upper : r.hB->lower).log2();
      if (h > -kInf) {
        rows.push_back({{vec4(-1, -m, 0, k), -h}, r.m, r.n, strong ? Inequality::ses2 : Inequality::es2pp});
      }
    } else {
      // k b <= N + m c + q
      const double q = (conservative ? r.qQ.lower : r.qQ.upper).log2();
      if (q == kInf) continue;
      FitRow row{{vec4(-1, -m, 0, k), q}, r.m, r.n, Inequality::es2};
      if (q == -kInf) {
        blocked = row;
        return false;
      }
      rows.push_back(std::move(row));
    }
  }
  return true;
}

std::vector<lp::Constraint> structural_rows(Concept notion, double log2_cap, Eigen::Index width) {
  std::vector<lp::Constraint> rows;
  const auto add = [&](double a0, double a1, double a2, double a3, double b) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(width);
    v.head(4) = vec4(a0, a1, a2, a3);
    rows.push_back({v, b});
  };
  add(0, 0, 1, -1, -kRateGap);
  add(-1, 0, 0, 0, 0);
  add(1, 0, 0, 0, log2_cap);
  add(0, -1, 0, 0, 0);
  add(0, 1, 0, 0, is_uniform(notion) ? 0.0 : kBox);
  add(0, 0, 1, 0, kBox);
  add(0, 0, -1, 0, kBox);
  add(0, 0, 0, 1, kBox);
  add(0, 0, 0, -1, kBox);
  if (is_dichotomy(notion)) {
    add(0, 0, 1, 0, -kRateGap);
    add(0, 0, 0, -1, -kRateGap);
  }
  return rows;
}

struct Phase1 {
  double relaxation = 0.0;
  std::vector<BindingConstraint> binding;
};

// min s subject to data rows relaxed by s and the structural rows.
Phase1 feasibility(const std::vector<FitRow>& data, Concept notion, double log2_cap) {
  std::vector<lp::Constraint> rows;
  for (const FitRow& r : data) {
    Eigen::VectorXd v(5);
    v.head(4) = r.row.a;
    v(4) = -1;
    rows.push_back({v, r.row.b});
  }
  for (auto& r : structural_rows(notion, log2_cap, 5)) rows.push_back(std::move(r));
  Eigen::VectorXd s_row = Eigen::VectorXd::Zero(5);
  s_row(4) = -1;
  rows.push_back({s_row, 1.0});
  s_row(4) = 1;
  rows.push_back({s_row, 1e6});

  Eigen::VectorXd objective = Eigen::VectorXd::Zero(5);
  objective(4) = -1;
  const lp::Solution sol = lp::maximize(objective, rows);
  Phase1 out;
  if (sol.status != lp::Status::optimal) throw DomainError("feasibility program failed");
  out.relaxation = sol.x(4);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double w = sol.multipliers(static_cast<Eigen::Index>(i));
    if (w > 1e-12) out.binding.push_back({data[i].m, data[i].n, data[i].tag, w});
  }
  return out;
}

Eigen::VectorXd lexicographic_optimum(const std::vector<FitRow>& data, Concept notion, double log2_cap) {
  std::vector<lp::Constraint> rows;
  for (const FitRow& r : data) rows.push_back(r.row);
  for (auto& r : structural_rows(notion, log2_cap, 4)) rows.push_back(std::move(r));

  // Minimize N, then a, then c; finally maximize b.
  const std::array<std::pair<int, double>, 4> order = {{{0, -1.0}, {2, -1.0}, {1, -1.0}, {3, 1.0}}};
  Eigen::VectorXd x;
  for (const auto& [index, sense] : order) {
    Eigen::VectorXd objective = Eigen::VectorXd::Zero(4);
    objective(index) = sense;
    const lp::Solution sol = lp::maximize(objective, rows);
    if (sol.status != lp::Status::optimal) throw DomainError("lexicographic fit step failed");
    x = sol.x;
    // Freeze this coordinate at its optimum (with a small allowance).
    Eigen::VectorXd freeze = Eigen::VectorXd::Zero(4);
    freeze(index) = -sense;
    rows.push_back({freeze, -sol.objective + 1e-10 * (1 + std::abs(sol.objective))});
  }
  return x;
}

}  // namespace

FitResult fit_certificate(const GainTable& table, Concept notion, double N_cap, double tol) {
  if (!(N_cap >= 1)) throw ConfigError("N_cap must be >= 1");
  const double log2_cap = std::log2(N_cap);
  FitResult out;

  std::vector<FitRow> rows;
  std::optional<FitRow> blocked;
  if (!data_rows(table, notion, true, rows, blocked)) {
    std::vector<FitRow> optimistic;
    std::optional<FitRow> still_blocked;
    out.status = data_rows(table, notion, false, optimistic, still_blocked) ? FitStatus::inconclusive
                                                                               : FitStatus::infeasible;
    out.binding.push_back({blocked->m, blocked->n, blocked->tag, 1.0});
    out.infeasibility = kInf;
    return out;
  }

  const Phase1 phase1 = feasibility(rows, notion, log2_cap);
  if (phase1.relaxation > tol) {
    out.binding = phase1.binding;
    out.infeasibility = phase1.relaxation;
    out.status = FitStatus::infeasible;
    if (table.has_brackets()) {
      std::vector<FitRow> optimistic;
      std::optional<FitRow> still_blocked;
      if (data_rows(table, notion, false, optimistic, still_blocked) &&
          feasibility(optimistic, notion, log2_cap).relaxation <= tol) {
        out.status = FitStatus::inconclusive;
      }
    }
    return out;
  }

  const Eigen::VectorXd x = lexicographic_optimum(rows, notion, log2_cap);
  Certificate cert;
  cert.notion = notion;
  cert.form = is_strong(notion) ? CertForm::strong : CertForm::restricted;
  cert.log2_N = std::max(0.0, x(0)) + kFitMargin;
  cert.log2_c = is_uniform(notion) ? 0.0 : std::max(0.0, x(1));
  cert.log2_a = x(2);
  cert.log2_b = x(3);
  validate(cert);
  out.cert = cert;
  const VerifyResult check = verify_certificate(table, cert, tol);
  out.status = check.ok ? FitStatus::feasible : FitStatus::inconclusive;
  return out;
}

namespace {

// (A_m^n)^{-1} for every window pair, built as A_n^{-1} ... A_{m-1}^{-1}.
std::map<std::pair<std::uint64_t, std::uint64_t>, ScaledMatrix> inverse_table(const SystemDef& sys,
                                                                             const PairWindow& window) {
  std::vector<ScaledMatrix> step_inverse;
  for (std::uint64_t k = 0; k < window.M; ++k) {
    step_inverse.push_back(inverse_evolution(sys, k + 1, k));
  }
  std::map<std::pair<std::uint64_t, std::uint64_t>, ScaledMatrix> out;
  for (std::uint64_t n = 0; n <= window.M; ++n) {
    ScaledMatrix current = ScaledMatrix::identity(sys.dim);
    out.emplace(std::pair{n, n}, current);
    for (std::uint64_t m = n + 1; m <= window.M; ++m) {
      current = current * step_inverse[m - 1];
      out.emplace(std::pair{m, n}, current);
    }
  }
  return out;
}

}  // namespace

VerifyResult verify_reversible(PairContext& ctx, const PairWindow& window, const Certificate& cert, double tol) {
  const SystemDef& sys = ctx.system();
  const auto inverses = inverse_table(sys, window);
  VerifyResult result;
  for (const auto& [m, n] : window.pairs()) {
    const Gain g = restricted_sup_gain(inverses.at({m, n}), ctx.at(m).kernel, sys.norm);
    const double growth = static_cast<double>(m - n) * cert.log2_b;
    const double rhs = cert.log2_N + static_cast<double>(m) * cert.log2_c;
    record(result, m, n, {Inequality::res2, growth + g.lower.log2(), growth + g.upper.log2(), rhs, rhs}, tol);
  }
  finish(result);
  return result;
}

ReversibleEquivalence reversible_es2_equiv(const SystemDef& sys, const ProjectionDef& p, const PairWindow& window,
                                           double tol) {
  PairContext ctx(sys, p);
  const auto inverses = inverse_table(sys, window);
  ReversibleEquivalence out;
  const auto gap = [](LogScalar a, LogScalar b) {
    if (a == b) return 0.0;
    return std::abs(a.log2() - b.log2());
  };
  for (const auto& [m, n] : window.pairs()) {
    const ScaledMatrix b = skew_evolution(ctx, m, n, tol);
    const ScaledMatrix inverse_q = inverses.at({m, n}) * ctx.at(m).q;
    out.full_norm = std::max(out.full_norm, gap(operator_norm(b, sys.norm), operator_norm(inverse_q, sys.norm)));
    const Gain hb = restricted_sup_gain(b, ctx.at(m).kernel, sys.norm);
    const Gain hi = restricted_sup_gain(inverses.at({m, n}), ctx.at(m).kernel, sys.norm);
    out.restricted = std::max(out.restricted, gap(hb.upper, hi.upper));
    out.operator_residual = std::max(out.operator_residual, relative_difference(b, inverse_q, sys.norm));
  }
  return out;
}

std::vector<InjectivityRow> kernel_injectivity_check(PairContext& ctx, const PairWindow& window) {
  std::vector<InjectivityRow> out;
  const Subspace whole = Subspace::whole(ctx.system().dim);
  for (const auto& [m, n] : window.pairs()) {
    InjectivityRow row;
    row.m = m;
    row.n = n;
    const Subspace& ker = ctx.at(n).kernel;
    if (ker.dim() > 0) {
      const RestrictedMap map = restrict_map(ctx.evolution(m, n), ker, whole, ctx.rank_tol());
      row.injective = map.rank == ker.dim();
      row.smallest_singular = map.smallest_singular;
    }
    out.push_back(row);
  }
  return out;
}

}  // namespace expsplit
