#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "expsplit/corpus.hpp"

namespace expsplit {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// {"log2": x, "value": "d.ddde+N"} with "inf" / "-inf" strings for sentinels.
Json to_json(LogScalar x);
Json to_json(const Gain& g);
Json to_json(const Certificate& cert);
Json to_json(const ViolationWitness& w);
Json to_json(const VerifyResult& r);
Json to_json(const FitResult& r);
Json to_json(const IsoReport& r);
Json to_json(const ConceptVerdict& v);
Json to_json(const GainTable& table);
Json to_json(const SkewResiduals& r);
Json to_json(const SharedRangeResiduals& r);

/// Accepts log2_N/log2_c/log2_a/log2_b or plain N/c/a/b; "form" defaults to
/// the concept's natural form. Throws ConfigError on malformed input or
/// constants that break the concept's constraints.
Certificate certificate_from_json(const Json& j);
/// A single certificate object or an array of them.
std::vector<Certificate> certificates_from_json(const Json& j);

/// A matrix as nested arrays; entries are numbers when a double holds them
/// exactly and decimal strings otherwise. Large exponents use
/// {"mantissa": [[...]], "exponent": e}.
Json matrix_to_json(const ScaledMatrix& m);
ScaledMatrix matrix_from_json(const Json& j);

Json rule_to_json(const RuleSpec& spec);
RuleSpec rule_from_json(const Json& j);

/// A system/projection pair loaded from a definition file.
struct Definition {
  std::string name;
  SystemDef system;
  ProjectionDef projection;
  std::optional<PairWindow> window;
};

/// {"schema_version": 1, "name": ..., "window": M,
///  "system": {"dim", "norm", "rule"}, "projection": {"rule"}}.
Json definition_to_json(const std::string& name, const SystemDef& sys, const ProjectionDef& p,
                        std::optional<PairWindow> window = std::nullopt);
/// Throws ConfigError on schema problems.
Definition definition_from_json(const Json& j);

SystemDef system_from_spec(const RuleSpec& spec, Index dim, NormKind norm);

Json corpus_entry_to_json(const CorpusEntry& entry);

/// The full analysis report. `expectations` and `references` are included when
/// non-empty.
Json report_to_json(const AnalysisReport& report, const std::vector<ExpectationOutcome>& expectations = {},
                    const std::vector<std::pair<Certificate, VerifyResult>>& references = {});

/// One row per window pair: log2 and decimal columns for every gain.
std::string gain_table_csv(const GainTable& table);

/// Decimal with 17 significant digits; "inf", "-inf" and "nan" spelled out.
std::string format_number(double x);

}  // namespace expsplit
