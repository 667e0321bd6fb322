#include "expsplit/classify.hpp"

#include <algorithm>

#include "expsplit/errors.hpp"

namespace expsplit {

std::string_view to_string(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::certified_by_user: return "CertifiedByUser";
    case VerdictKind::certified_by_fit: return "CertifiedByFit";
    case VerdictKind::infeasible: return "Infeasible";
    case VerdictKind::trend_blocked: return "TrendBlocked";
    case VerdictKind::inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

std::vector<std::pair<Concept, Concept>> diagram_arrows() {
  using C = Concept;
  return {{C::USED, C::USES}, {C::USED, C::UED}, {C::USED, C::SED}, {C::USES, C::UES}, {C::USES, C::SES},
          {C::SED, C::SES},   {C::SED, C::ED},   {C::UED, C::UES},  {C::UED, C::ED},   {C::SES, C::ES},
          {C::UES, C::ES},    {C::ED, C::ES}};
}

bool implies(Concept stronger, Concept weaker) {
  if (stronger == weaker) return true;
  for (const auto& [from, to] : diagram_arrows()) {
    if (from == stronger && implies(to, weaker)) return true;
  }
  return false;
}

const ConceptVerdict& AnalysisReport::verdict(Concept c) const {
  for (const auto& v : verdicts) {
    if (v.notion == c) return v;
  }
  throw DomainError("report has no verdict for " + std::string(to_string(c)));
}

std::vector<std::string> diagram_violations(const std::vector<ConceptVerdict>& verdicts) {
  std::vector<std::string> out;
  for (const auto& strong : verdicts) {
    if (!strong.certified()) continue;
    for (const auto& weak : verdicts) {
      if (weak.notion == strong.notion || weak.kind != VerdictKind::infeasible) continue;
      if (implies(strong.notion, weak.notion)) {
        out.push_back(std::string(to_string(strong.notion)) + " is certified but implied " +
                      std::string(to_string(weak.notion)) + " is infeasible");
      }
    }
  }
  return out;
}

namespace {

ConceptVerdict decide(const GainTable& table, const AnalysisReport& report, Concept notion,
                      const ClassifyOptions& options) {
  ConceptVerdict v;
  v.notion = notion;
  for (const Certificate& cert : options.user_certificates) {
    if (cert.notion != notion) continue;
    if (is_strong(notion) && !table.has_skew_columns()) continue;
    const VerifyResult check = verify_certificate(table, cert, options.tol);
    if (check.ok) {
      v.kind = VerdictKind::certified_by_user;
      v.cert = cert;
      return v;
    }
  }
  if (is_strong(notion)) {
    if (report.projection_bound.trend == Trend::superexponential) {
      v.kind = VerdictKind::trend_blocked;
      v.note = "projection norms grow superexponentially";
      return v;
    }
    if (!table.strongly_invariant) {
      v.kind = VerdictKind::inconclusive;
      v.note = "projections are not strongly invariant";
      return v;
    }
  }
  const FitResult fit = fit_certificate(table, notion, options.N_cap, options.tol);
  switch (fit.status) {
    case FitStatus::feasible:
      v.kind = VerdictKind::certified_by_fit;
      v.cert = fit.cert;
      break;
    case FitStatus::infeasible:
      v.kind = VerdictKind::infeasible;
      v.binding = fit.binding;
      v.infeasibility = fit.infeasibility;
      break;
    case FitStatus::inconclusive:
      v.kind = VerdictKind::inconclusive;
      v.binding = fit.binding;
      v.note = "decision depends on the interior of a gain bracket";
      break;
  }
  return v;
}

}  // namespace

AnalysisReport classify(const SystemDef& sys, const ProjectionDef& p, const ClassifyOptions& options) {
  if (sys.dim != p.dim) throw DimensionMismatch("system and projection dimensions differ");
  for (const Certificate& cert : options.user_certificates) validate(cert);

  AnalysisReport report;
  report.options = options;
  const PairWindow& window = options.window;
  report.validation = validate_projection(p, window, options.tol, sys.norm);
  report.cocycle = cocycle_residual(sys, window);
  if (window.M >= 4) report.projection_bound = exp_bound_fit(p, window, sys.norm, options.N_cap);

  if (report.validation.ok) report.invariance = invariance_check(sys, p, window, options.tol);
  const bool usable = report.validation.ok && report.invariance.ok;
  if (usable) {
    PairContext ctx(sys, p);
    report.table = gain_table(ctx, window, options.tol, options.gains);
    for (const auto& row : kernel_injectivity_check(ctx, window)) {
      if (!row.injective) {
        report.injectivity.all_injective = false;
        report.injectivity.first_failure = row;
        break;
      }
    }
  }

  for (Concept notion : kAllConcepts) {
    if (!usable) {
      ConceptVerdict v;
      v.notion = notion;
      v.note = report.validation.ok ? "projections are not invariant" : "projection sequence is not idempotent";
      report.verdicts.push_back(std::move(v));
      continue;
    }
    report.verdicts.push_back(decide(*report.table, report, notion, options));
  }

  report.internal_errors = diagram_violations(report.verdicts);
  if (usable) {
    for (const auto& v : report.verdicts) {
      if (!v.certified()) continue;
      if (v.cert->form == CertForm::strong) {
        if (!verify_certificate(*report.table, weaken(*v.cert).cert, options.tol).ok) {
          report.internal_errors.push_back(std::string(to_string(v.notion)) +
                                           " constants verify in strong form but not in restricted form");
        }
      } else if (!report.injectivity.all_injective) {
        report.internal_errors.push_back(std::string(to_string(v.notion)) +
                                         " is certified but some A_m^n is not injective on Ker P_n");
      }
    }
  }
  return report;
}

}  // namespace expsplit
