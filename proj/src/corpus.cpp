#include "expsplit/corpus.hpp"

#include <cmath>
#include <sstream>

#include "expsplit/builtins.hpp"
#include "expsplit/errors.hpp"

namespace expsplit {

namespace {

using Kind = Expectation::Kind;

Expectation expect(Kind kind, std::string expected, std::string note) {
  Expectation e;
  e.kind = kind;
  e.expected = std::move(expected);
  e.note = std::move(note);
  return e;
}

Expectation expect_verdict(Concept c, VerdictKind kind, std::string note) {
  Expectation e = expect(Kind::verdict, std::string(to_string(kind)), std::move(note));
  e.notion = c;
  return e;
}

Expectation expect_cocycle(double bound) {
  Expectation e = expect(Kind::cocycle, "ok", "evolution operators compose");
  e.bound = bound;
  return e;
}

Certificate cert(Concept c, double N, double lc, double la, double lb, CertForm form = CertForm::restricted) {
  return {c, N, lc, la, lb, form};
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

CorpusEntry identity_r2() {
  CorpusEntry e;
  e.name = "identity_r2";
  e.description = "A_n = I on R^2 with P_n = diag(1, 0)";
  e.system = builtin_system("identity", {{"dim", 2}});
  Mat p = Mat::Zero(2, 2);
  p(0, 0) = 1;
  e.projection = explicit_projection({ScaledMatrix(p)});
  e.default_window = {20};
  e.expected = {expect(Kind::invariant, "ok", "constant projector commutes with I"),
                expect(Kind::all_iso, "ok", "identity restricts to the identity on Ker P_n"),
                expect_cocycle(0.0)};
  return e;
}

CorpusEntry example11() {
  CorpusEntry e;
  e.name = "example11_r3";
  e.description = "A_n = diag(2, a_n, 4) on R^3 (a_0 = 0, a_n = 4), sup norm; invariant, not strongly invariant";
  e.system = builtin_system("example11_r3");
  e.projection = builtin_projection("example11_r3");
  e.default_window = {40};
  Expectation strong = expect(Kind::strong_invariance, "dim_mismatch", "Ker P_0 has dimension 1, Ker P_1 dimension 2");
  strong.m = 1;
  strong.n = 0;
  Expectation witness = expect(Kind::kernel_not_attained, "ok", "y = (1,-1,0) in Ker P_1 has no preimage in Ker P_0");
  witness.m = 1;
  witness.n = 0;
  witness.vector = {1, -1, 0};
  e.expected = {expect(Kind::invariant, "ok", "A_n P_n = P_{n+1} A_n holds exactly"), strong, witness,
                expect_cocycle(1e-9)};
  return e;
}

CorpusEntry example2() {
  CorpusEntry e;
  e.name = "example2_r2";
  e.description = "A_n = 2 P_n + 4 Q_{n+1} on R^2, P_n = [[1, 2^{n^2} - 1], [0, 0]]";
  e.system = builtin_system("example2_r2");
  e.projection = builtin_projection("example2_r2");
  e.default_window = {20};
  e.expected = {
      expect(Kind::invariant, "ok", "A_n P_n = 2 P_{n+1} P_n = P_{n+1} A_n"),
      expect(Kind::all_iso, "ok", "A_m^n acts as 4^{m-n} from Ker P_n onto Ker P_m"),
      expect_cocycle(1e-9),
      expect(Kind::trend, "superexponential", "||P_n|| = 2^{n^2}"),
      expect_verdict(Concept::UES, VerdictKind::certified_by_fit, "u.e.s. with N = 1, a = 2, b = 4"),
      expect_verdict(Concept::ES, VerdictKind::certified_by_fit, "implied by u.e.s."),
      expect_verdict(Concept::SES, VerdictKind::trend_blocked, "projectors are not exponentially bounded"),
      expect_verdict(Concept::USES, VerdictKind::trend_blocked, "projectors are not exponentially bounded"),
      expect_verdict(Concept::UED, VerdictKind::infeasible, "growth rate 2 on Range P_n"),
  };
  e.reference_certificates = {cert(Concept::UES, 0, 0, 1, 2)};
  return e;
}

CorpusEntry example3() {
  CorpusEntry e;
  e.name = "example3_r2";
  e.description = "A_n = 2^{-d_n} P_n + 4^{d_n} Q_{n+1} on R^2 with d_n = a_{n+1} - a_n, "
                  "a_n = n / (1 + 2 cos^2(n pi / 2)); projectors of example2_r2";
  e.system = builtin_system("example3_r2");
  e.projection = builtin_projection("example3_r2");
  e.default_window = {40};
  e.expected = {
      expect(Kind::invariant, "ok", "steps are diagonal in the (P_n, Q_n) splitting"),
      expect(Kind::all_iso, "ok", "A_m^n acts as a scalar from Ker P_n onto Ker P_m"),
      expect_cocycle(1e-9),
      expect_verdict(Concept::ES, VerdictKind::certified_by_fit, "e.s. with N = 1, a = 2^{-1/3}, b = 4^{1/3}"),
      expect_verdict(Concept::UES, VerdictKind::infeasible, "gP(2k+2, 2k+1) = 2^{(4k+1)/3}"),
  };
  e.reference_certificates = {cert(Concept::ES, 0, 4.0 / 3, -1.0 / 3, 2.0 / 3)};
  return e;
}

CorpusEntry example4(const Params& params) {
  CorpusEntry e;
  e.name = "example4_block";
  e.description = "repeating 2x2 block of the l^inf system: example3_r2 rates with P_n = [[1, 2^n - 1], [0, 0]]";
  e.system = builtin_system("example4_block", params);
  e.projection = builtin_projection("example4_block", params);
  e.default_window = {40};
  e.expected = {
      expect(Kind::invariant, "ok", "steps are diagonal in the (P_n, Q_n) splitting"),
      expect(Kind::all_iso, "ok", "A_m^n acts as a scalar from Ker P_n onto Ker P_m"),
      expect_cocycle(1e-9),
      expect(Kind::trend, "exponential", "||P_n|| = 2^n"),
      expect_verdict(Concept::SES, VerdictKind::certified_by_fit, "s.e.s. with N = 1, c = 4^{5/3}"),
      expect_verdict(Concept::ES, VerdictKind::certified_by_fit, "implied by s.e.s."),
      expect_verdict(Concept::UES, VerdictKind::infeasible, "log2 GP(2k+2, 2k+1) = (10k+4)/3"),
  };
  e.reference_certificates = {cert(Concept::SES, 0, 10.0 / 3, -1.0 / 3, 2.0 / 3, CertForm::strong),
                          cert(Concept::ES, 0, 4.0 / 3, -1.0 / 3, 2.0 / 3)};
  return e;
}

std::uint64_t uint_param(const Params& params, const std::string& key, std::uint64_t fallback, std::uint64_t hi) {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  const double v = it->second;
  if (v != std::floor(v) || v < 0 || v > static_cast<double>(hi)) {
    throw ConfigError("parameter '" + key + "' must be an integer in [0, " + std::to_string(hi) + "]");
  }
  return static_cast<std::uint64_t>(v);
}

std::string observe(const CorpusEntry& entry, const Expectation& e, const AnalysisReport* report) {
  const SystemDef& sys = entry.system;
  const ProjectionDef& p = entry.projection;
  const PairWindow& window = entry.default_window;
  switch (e.kind) {
    case Kind::invariant: {
      const auto r = invariance_check(sys, p, window, kDefaultTol);
      return r.ok ? "ok" : "fails at n = " + std::to_string(*r.witness);
    }
    case Kind::strong_invariance:
      return std::string(to_string(strong_invariance_check(sys, p, e.m, e.n, kDefaultTol).verdict));
    case Kind::all_iso: {
      PairContext ctx(sys, p);
      const auto failure = first_strong_invariance_failure(ctx, window, kDefaultTol);
      if (!failure) return "ok";
      return std::string(to_string(failure->verdict)) + " at (" + std::to_string(failure->m) + "," +
             std::to_string(failure->n) + ")";
    }
    case Kind::kernel_not_attained: {
      Vec y(static_cast<Index>(e.vector.size()));
      for (Index i = 0; i < y.size(); ++i) y(i) = e.vector[static_cast<std::size_t>(i)];
      const ProjectorData at_m = projector_data(p, e.m);
      const double in_kernel = distance_from(at_m.kernel, y);
      if (in_kernel > 1e-9) return "vector not in Ker P_m";
      const Subspace image = column_space(evolution(sys, e.m, e.n).dense() * projector_data(p, e.n).kernel.basis);
      return distance_from(image, y) > 1e-9 ? "ok" : "attained";
    }
    case Kind::cocycle: {
      const auto r = cocycle_residual(sys, window);
      return r.residual <= e.bound ? "ok" : "residual " + format_double(r.residual);
    }
    case Kind::trend:
      return std::string(to_string(exp_bound_fit(p, window, sys.norm).trend));
    case Kind::verdict:
      return std::string(to_string(report->verdict(e.notion).kind));
  }
  return "";
}

}  // namespace

std::string Expectation::label() const {
  switch (kind) {
    case Kind::invariant: return "invariance";
    case Kind::strong_invariance:
      return "strong invariance (" + std::to_string(m) + "," + std::to_string(n) + ")";
    case Kind::all_iso: return "strong invariance on the window";
    case Kind::kernel_not_attained:
      return "kernel vector not attained (" + std::to_string(m) + "," + std::to_string(n) + ")";
    case Kind::cocycle: return "cocycle";
    case Kind::trend: return "projector trend";
    case Kind::verdict: return "verdict " + std::string(to_string(notion));
  }
  return "";
}

std::vector<std::string> corpus_names() {
  return {"identity_r2", "example11_r3", "example2_r2", "example3_r2", "example4_block", "random_reversible"};
}

CorpusEntry builtin(const std::string& name, const Params& params) {
  auto no_params = [&] {
    if (!params.empty()) throw ConfigError("corpus entry '" + name + "' takes no parameters");
  };
  if (name == "identity_r2") return no_params(), identity_r2();
  if (name == "example11_r3") return no_params(), example11();
  if (name == "example2_r2") return no_params(), example2();
  if (name == "example3_r2") return no_params(), example3();
  if (name == "example4_block") return example4(params);
  if (name == "random_reversible") {
    for (const auto& [key, value] : params) {
      if (key != "seed" && key != "dim" && key != "window") {
        throw ConfigError("corpus entry '" + name + "' has no parameter '" + key + "'");
      }
    }
    return random_reversible(uint_param(params, "seed", 1, std::uint64_t{1} << 52),
                             static_cast<Index>(uint_param(params, "dim", 3, 8)),
                             uint_param(params, "window", 10, 64));
  }
  throw ConfigError("unknown corpus entry '" + name + "'");
}

CorpusEntry random_reversible(std::uint64_t seed, Index dim, std::uint64_t window) {
  if (dim < 1 || dim > 8) throw ConfigError("random_reversible needs 1 <= dim <= 8");
  const Params params = {{"seed", static_cast<double>(seed)}, {"dim", static_cast<double>(dim)}};
  CorpusEntry e;
  e.name = "random_reversible";
  e.description = "random invertible steps U diag(2^u) V^T, u in [-1, 1], with a transported projector (seed " +
                  std::to_string(seed) + ", dim " + std::to_string(dim) + ")";
  e.system = builtin_system("random_reversible", params);
  e.projection = builtin_projection("random_reversible", params);
  e.default_window = {window};
  e.expected = {expect(Kind::invariant, "ok", "P_{n+1} A_n = A_n P_n by construction"),
                expect(Kind::all_iso, "ok", "invertible steps map Ker P_n onto Ker P_m"), expect_cocycle(1e-9)};
  return e;
}

ClassifyOptions default_options(const CorpusEntry& entry) {
  ClassifyOptions options;
  options.window = entry.default_window;
  return options;
}

std::vector<ExpectationOutcome> check_expectations(const CorpusEntry& entry, const AnalysisReport* report) {
  std::optional<AnalysisReport> own;
  for (const auto& e : entry.expected) {
    if (e.kind == Kind::verdict && !report) {
      own = classify(entry.system, entry.projection, default_options(entry));
      report = &*own;
      break;
    }
  }
  std::vector<ExpectationOutcome> out;
  for (const auto& e : entry.expected) {
    ExpectationOutcome o;
    o.expectation = e;
    o.observed = observe(entry, e, report);
    o.passed = o.observed == e.expected;
    out.push_back(std::move(o));
  }
  return out;
}

}  // namespace expsplit
