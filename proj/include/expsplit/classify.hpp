#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "expsplit/splitting.hpp"

namespace expsplit {

enum class VerdictKind { certified_by_user, certified_by_fit, infeasible, trend_blocked, inconclusive };
std::string_view to_string(VerdictKind kind);

struct ConceptVerdict {
  Concept notion = Concept::ES;
  VerdictKind kind = VerdictKind::inconclusive;
  std::optional<Certificate> cert;
  std::vector<BindingConstraint> binding;  // infeasible fits
  double infeasibility = 0.0;
  std::string note;

  bool certified() const {
    return kind == VerdictKind::certified_by_user || kind == VerdictKind::certified_by_fit;
  }
};

/// Direct arrows of the implication diagram (stronger, weaker).
std::vector<std::pair<Concept, Concept>> diagram_arrows();
/// Does `stronger` imply `weaker` through a chain of arrows (or equality)?
bool implies(Concept stronger, Concept weaker);

struct ClassifyOptions {
  PairWindow window{40};
  double N_cap = 1e3;
  double tol = kDefaultTol;
  std::vector<Certificate> user_certificates;
  GainOptions gains;
};

struct InjectivitySummary {
  bool all_injective = true;
  std::optional<InjectivityRow> first_failure;
};

struct AnalysisReport {
  ClassifyOptions options;
  IdempotencyResult validation;
  InvarianceResult invariance;
  CocycleResult cocycle;
  ExpBoundFit projection_bound;
  std::optional<GainTable> table;  // absent when the projections are invalid or not invariant
  InjectivitySummary injectivity;
  std::vector<ConceptVerdict> verdicts;  // in kAllConcepts order
  /// Internal consistency failures: diagram arrows, strong/restricted and
  /// injectivity couplings. Empty on every healthy run.
  std::vector<std::string> internal_errors;

  const ConceptVerdict& verdict(Concept c) const;
};

AnalysisReport classify(const SystemDef& sys, const ProjectionDef& p, const ClassifyOptions& options);

/// Diagram consistency of a verdict set: no certified notion may imply an
/// infeasible one. Returns one message per broken arrow.
std::vector<std::string> diagram_violations(const std::vector<ConceptVerdict>& verdicts);

}  // namespace expsplit
