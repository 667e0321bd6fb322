#include "expsplit/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "expsplit/builtins.hpp"
#include "expsplit/errors.hpp"

namespace expsplit {

namespace {

Json log2_json(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

Json optional_index(const std::optional<std::uint64_t>& n) { return n ? Json(*n) : Json(nullptr); }

const Json& require(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(where + " is missing \"" + key + "\"");
  return j.at(key);
}

double number(const Json& j, const std::string& what) {
  if (!j.is_number()) throw ConfigError(what + " must be a number");
  return j.get<double>();
}

Real real_entry(const Json& j) {
  if (j.is_number()) return Real(j.get<double>());
  if (j.is_string()) {
    try {
      Real x(j.get<std::string>());
      if (!is_finite(x)) throw ConfigError("matrix entry must be finite");
      return x;
    } catch (const std::runtime_error&) {
      throw ConfigError("matrix entry '" + j.get<std::string>() + "' is not a number");
    }
  }
  throw ConfigError("matrix entries must be numbers or decimal strings");
}

Json real_json(const Real& x) {
  const double d = static_cast<double>(x);
  if (Real(d) == x) return d;
  return x.str(kRealDigits10, std::ios_base::scientific);
}

Mat nested_matrix(const Json& rows) {
  if (!rows.is_array() || rows.empty()) throw ConfigError("matrix must be a non-empty array of rows");
  const auto dim = static_cast<Index>(rows.size());
  Mat m(dim, dim);
  for (Index i = 0; i < dim; ++i) {
    const Json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != dim) throw ConfigError("matrix must be square");
    for (Index k = 0; k < dim; ++k) m(i, k) = real_entry(row[static_cast<std::size_t>(k)]);
  }
  return m;
}

Json params_json(const Params& params) {
  Json out = Json::object();
  for (const auto& [key, value] : params) out[key] = value;
  return out;
}

Json expectation_json(const ExpectationOutcome& o) {
  Json j;
  j["check"] = o.expectation.label();
  j["expected"] = o.expectation.expected;
  j["observed"] = o.observed;
  j["passed"] = o.passed;
  j["note"] = o.expectation.note;
  return j;
}

Json binding_json(const BindingConstraint& b) {
  Json j;
  j["m"] = b.m;
  j["n"] = b.n;
  j["tag"] = std::string(to_string(b.tag));
  j["weight"] = b.weight;
  return j;
}

void csv_log(std::ostringstream& os, LogScalar x) {
  os << ',';
  if (x.is_zero()) {
    os << "-inf";
  } else if (x.is_infinite()) {
    os << "inf";
  } else {
    os << format_number(x.log2());
  }
}

void csv_gain(std::ostringstream& os, const std::optional<Gain>& g) {
  if (!g) {
    os << ",,,,";
    return;
  }
  csv_log(os, g->lower);
  csv_log(os, g->upper);
  os << ',' << g->lower.decimal() << ',' << g->upper.decimal();
}

void csv_scalar(std::ostringstream& os, const std::optional<LogScalar>& x) {
  if (!x) {
    os << ",,";
    return;
  }
  csv_log(os, *x);
  os << ',' << x->decimal();
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", x);
  return buffer;
}

Json to_json(LogScalar x) {
  Json j;
  j["log2"] = log2_json(x.log2());
  j["value"] = x.decimal();
  return j;
}

Json to_json(const Gain& g) {
  Json j;
  j["lower"] = to_json(g.lower);
  j["upper"] = to_json(g.upper);
  j["exact"] = g.exact();
  return j;
}

Json to_json(const Certificate& cert) {
  Json j;
  j["concept"] = std::string(to_string(cert.notion));
  j["log2_N"] = cert.log2_N;
  j["log2_c"] = cert.log2_c;
  j["log2_a"] = cert.log2_a;
  j["log2_b"] = cert.log2_b;
  j["form"] = std::string(to_string(cert.form));
  return j;
}

Json to_json(const ViolationWitness& w) {
  Json j;
  j["m"] = w.m;
  j["n"] = w.n;
  j["tag"] = std::string(to_string(w.tag));
  j["lhs"] = to_json(w.lhs);
  j["rhs"] = to_json(w.rhs);
  return j;
}

Json to_json(const VerifyResult& r) {
  Json j;
  j["ok"] = r.ok;
  j["inconclusive"] = r.inconclusive;
  j["witness"] = r.witness ? to_json(*r.witness) : Json(nullptr);
  j["undecided"] = r.undecided ? to_json(*r.undecided) : Json(nullptr);
  j["min_slack_log2"] = log2_json(r.min_slack);
  return j;
}

Json to_json(const FitResult& r) {
  Json j;
  j["status"] = std::string(to_string(r.status));
  j["certificate"] = r.cert ? to_json(*r.cert) : Json(nullptr);
  j["infeasibility_log2"] = log2_json(r.infeasibility);
  Json binding = Json::array();
  for (const auto& b : r.binding) binding.push_back(binding_json(b));
  j["binding"] = std::move(binding);
  return j;
}

Json to_json(const IsoReport& r) {
  Json j;
  j["m"] = r.m;
  j["n"] = r.n;
  j["verdict"] = std::string(to_string(r.verdict));
  j["dim_ker_n"] = r.dim_ker_n;
  j["dim_ker_m"] = r.dim_ker_m;
  j["rank"] = r.rank;
  j["containment_residual"] = r.containment_residual;
  j["smallest_singular"] = to_json(r.smallest_singular);
  j["largest_singular"] = to_json(r.largest_singular);
  return j;
}

Json to_json(const ConceptVerdict& v) {
  Json j;
  j["concept"] = std::string(to_string(v.notion));
  j["verdict"] = std::string(to_string(v.kind));
  j["certificate"] = v.cert ? to_json(*v.cert) : Json(nullptr);
  if (v.kind == VerdictKind::infeasible) {
    j["infeasibility_log2"] = log2_json(v.infeasibility);
    Json binding = Json::array();
    for (const auto& b : v.binding) binding.push_back(binding_json(b));
    j["binding"] = std::move(binding);
  }
  j["note"] = v.note;
  return j;
}

Json to_json(const GainTable& table) {
  Json j;
  j["window"] = table.window.M;
  j["norm"] = std::string(to_string(table.norm));
  j["strongly_invariant"] = table.strongly_invariant;
  j["brackets"] = table.has_brackets();
  Json p_norms = Json::array(), q_norms = Json::array();
  for (const auto& x : table.p_norms) p_norms.push_back(to_json(x));
  for (const auto& x : table.q_norms) q_norms.push_back(to_json(x));
  j["p_norms"] = std::move(p_norms);
  j["q_norms"] = std::move(q_norms);
  Json rows = Json::array();
  for (const auto& r : table.rows) {
    Json row;
    row["m"] = r.m;
    row["n"] = r.n;
    row["gP"] = to_json(r.gP);
    row["qQ"] = to_json(r.qQ);
    row["GP"] = to_json(r.GP);
    row["HB"] = r.HB ? to_json(*r.HB) : Json(nullptr);
    row["hB"] = r.hB ? to_json(*r.hB) : Json(nullptr);
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return j;
}

Json to_json(const SkewResiduals& r) {
  Json j;
  j["b1"] = r.b1;
  j["b2"] = r.b2;
  j["b3"] = r.b3;
  j["b4"] = r.b4;
  j["b5"] = r.b5;
  return j;
}

Json to_json(const SharedRangeResiduals& r) {
  Json j;
  j["r1"] = r.r1;
  j["r2"] = r.r2;
  j["r3"] = r.r3;
  j["r4"] = r.r4;
  return j;
}

Certificate certificate_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("certificate must be a JSON object");
  Certificate cert;
  const Json& name = require(j, "concept", "certificate");
  if (!name.is_string()) throw ConfigError("certificate \"concept\" must be a string");
  cert.notion = parse_concept(name.get<std::string>());
  cert.form = is_strong(cert.notion) ? CertForm::strong : CertForm::restricted;
  if (j.contains("form")) {
    if (!j.at("form").is_string()) throw ConfigError("certificate \"form\" must be a string");
    cert.form = parse_form(j.at("form").get<std::string>());
  }
  const auto field = [&](const char* log_key, const char* plain_key, double fallback_log2) {
    if (j.contains(log_key)) return number(j.at(log_key), std::string("certificate \"") + log_key + "\"");
    if (j.contains(plain_key)) {
      const double v = number(j.at(plain_key), std::string("certificate \"") + plain_key + "\"");
      if (!(v > 0)) throw ConfigError(std::string("certificate \"") + plain_key + "\" must be positive");
      return std::log2(v);
    }
    if (std::isnan(fallback_log2)) {
      throw ConfigError(std::string("certificate is missing \"") + log_key + "\" (or \"" + plain_key + "\")");
    }
    return fallback_log2;
  };
  const double missing = std::nan("");
  cert.log2_N = field("log2_N", "N", missing);
  cert.log2_c = field("log2_c", "c", is_uniform(cert.notion) ? 0.0 : missing);
  cert.log2_a = field("log2_a", "a", missing);
  cert.log2_b = field("log2_b", "b", missing);
  validate(cert);
  return cert;
}

std::vector<Certificate> certificates_from_json(const Json& j) {
  std::vector<Certificate> out;
  if (j.is_array()) {
    for (const auto& item : j) out.push_back(certificate_from_json(item));
  } else {
    out.push_back(certificate_from_json(j));
  }
  if (out.empty()) throw ConfigError("no certificates given");
  return out;
}

Json matrix_to_json(const ScaledMatrix& m) {
  const Mat& mant = m.mantissa();
  const bool small = m.exponent() >= -60 && m.exponent() <= 60;
  const Mat values = small ? m.dense() : mant;
  Json rows = Json::array();
  for (Index i = 0; i < values.rows(); ++i) {
    Json row = Json::array();
    for (Index k = 0; k < values.cols(); ++k) row.push_back(real_json(values(i, k)));
    rows.push_back(std::move(row));
  }
  if (small) return rows;
  Json j;
  j["mantissa"] = std::move(rows);
  j["exponent"] = m.exponent();
  return j;
}

ScaledMatrix matrix_from_json(const Json& j) {
  if (j.is_object()) {
    const Json& e = require(j, "exponent", "matrix");
    if (!e.is_number_integer()) throw ConfigError("matrix \"exponent\" must be an integer");
    return ScaledMatrix(nested_matrix(require(j, "mantissa", "matrix")), e.get<std::int64_t>());
  }
  return ScaledMatrix(nested_matrix(j));
}

Json rule_to_json(const RuleSpec& spec) {
  Json j;
  if (spec.builtin.empty()) {
    Json list = Json::array();
    for (const auto& m : spec.matrices) list.push_back(matrix_to_json(m));
    j["explicit"] = std::move(list);
    return j;
  }
  j["builtin"] = spec.builtin;
  j["params"] = params_json(spec.params);
  if (spec.base) j["base"] = rule_to_json(*spec.base);
  return j;
}

RuleSpec rule_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("rule must be a JSON object");
  RuleSpec spec;
  if (j.contains("explicit")) {
    const Json& list = j.at("explicit");
    if (!list.is_array() || list.empty()) throw ConfigError("\"explicit\" must be a non-empty array of matrices");
    for (const auto& m : list) spec.matrices.push_back(matrix_from_json(m));
    return spec;
  }
  const Json& name = require(j, "builtin", "rule");
  if (!name.is_string()) throw ConfigError("rule \"builtin\" must be a string");
  spec.builtin = name.get<std::string>();
  if (j.contains("params")) {
    const Json& params = j.at("params");
    if (!params.is_object()) throw ConfigError("rule \"params\" must be an object");
    for (const auto& [key, value] : params.items()) spec.params[key] = number(value, "parameter \"" + key + "\"");
  }
  if (j.contains("base")) spec.base = std::make_shared<RuleSpec>(rule_from_json(j.at("base")));
  return spec;
}

SystemDef system_from_spec(const RuleSpec& spec, Index dim, NormKind norm) {
  SystemDef sys = spec.builtin.empty() ? explicit_system(spec.matrices, norm) : builtin_system(spec.builtin, spec.params, norm);
  if (sys.dim != dim) {
    throw ConfigError("system \"dim\" is " + std::to_string(dim) + " but the rule has dimension " +
                      std::to_string(sys.dim));
  }
  return sys;
}

Json definition_to_json(const std::string& name, const SystemDef& sys, const ProjectionDef& p,
                        std::optional<PairWindow> window) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["name"] = name;
  if (window) j["window"] = window->M;
  Json system;
  system["dim"] = sys.dim;
  system["norm"] = std::string(to_string(sys.norm));
  system["rule"] = rule_to_json(sys.spec);
  j["system"] = std::move(system);
  Json projection;
  projection["rule"] = rule_to_json(p.spec);
  j["projection"] = std::move(projection);
  return j;
}

Definition definition_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("definition must be a JSON object");
  const Json& version = require(j, "schema_version", "definition");
  if (!version.is_number_integer() || version.get<int>() != kSchemaVersion) {
    throw ConfigError("unsupported schema_version (expected " + std::to_string(kSchemaVersion) + ")");
  }
  Definition def;
  def.name = j.contains("name") && j.at("name").is_string() ? j.at("name").get<std::string>() : "definition";
  if (j.contains("window")) {
    const Json& w = j.at("window");
    if (!w.is_number_unsigned()) throw ConfigError("\"window\" must be a nonnegative integer");
    def.window = PairWindow{w.get<std::uint64_t>()};
  }
  const Json& system = require(j, "system", "definition");
  const Json& dim = require(system, "dim", "system");
  if (!dim.is_number_unsigned() || dim.get<std::uint64_t>() == 0) throw ConfigError("system \"dim\" must be positive");
  NormKind norm = NormKind::sup;
  if (system.contains("norm")) {
    if (!system.at("norm").is_string()) throw ConfigError("system \"norm\" must be a string");
    norm = parse_norm(system.at("norm").get<std::string>());
  }
  def.system = system_from_spec(rule_from_json(require(system, "rule", "system")), dim.get<Index>(), norm);
  const Json& projection = require(j, "projection", "definition");
  def.projection = projection_from_spec(rule_from_json(require(projection, "rule", "projection")));
  if (def.projection.dim != def.system.dim) {
    throw ConfigError("projection dimension " + std::to_string(def.projection.dim) + " differs from system dimension " +
                      std::to_string(def.system.dim));
  }
  return def;
}

Json corpus_entry_to_json(const CorpusEntry& entry) {
  Json j = definition_to_json(entry.name, entry.system, entry.projection, entry.default_window);
  j["description"] = entry.description;
  Json expected = Json::array();
  for (const auto& e : entry.expected) {
    Json item;
    item["check"] = e.label();
    item["expected"] = e.expected;
    item["note"] = e.note;
    expected.push_back(std::move(item));
  }
  j["expected"] = std::move(expected);
  Json certs = Json::array();
  for (const auto& c : entry.reference_certificates) certs.push_back(to_json(c));
  j["reference_certificates"] = std::move(certs);
  return j;
}

Json report_to_json(const AnalysisReport& report, const std::vector<ExpectationOutcome>& expectations,
                    const std::vector<std::pair<Certificate, VerifyResult>>& references) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  Json config;
  config["window"] = report.options.window.M;
  config["ncap"] = report.options.N_cap;
  config["tol"] = report.options.tol;
  config["seed"] = report.options.gains.seed;
  j["config"] = std::move(config);

  Json validation;
  validation["ok"] = report.validation.ok;
  validation["residual"] = report.validation.residual;
  validation["witness"] = optional_index(report.validation.witness);
  j["validation"] = std::move(validation);

  Json invariance;
  invariance["ok"] = report.invariance.ok;
  invariance["residual"] = report.invariance.residual;
  invariance["witness"] = optional_index(report.invariance.witness);
  j["invariance"] = std::move(invariance);

  Json cocycle;
  cocycle["residual"] = report.cocycle.residual;
  cocycle["worst"] = {report.cocycle.m, report.cocycle.n, report.cocycle.p};
  j["cocycle"] = std::move(cocycle);

  Json strong;
  if (report.table) {
    strong["strongly_invariant"] = report.table->strongly_invariant;
    strong["first_failure"] = report.table->strong_failure ? to_json(*report.table->strong_failure) : Json(nullptr);
  } else {
    strong["strongly_invariant"] = nullptr;
    strong["first_failure"] = nullptr;
  }
  j["strong_invariance"] = std::move(strong);

  Json bound;
  bound["log2_M"] = report.projection_bound.cert.log2_M;
  bound["log2_p"] = report.projection_bound.cert.log2_p;
  bound["trend"] = std::string(to_string(report.projection_bound.trend));
  bound["within_cap"] = report.projection_bound.within_cap;
  bound["slope"] = report.projection_bound.slope;
  bound["curvature"] = report.projection_bound.curvature;
  j["projection_bound"] = std::move(bound);

  Json injectivity;
  injectivity["all_injective"] = report.injectivity.all_injective;
  if (report.injectivity.first_failure) {
    const auto& f = *report.injectivity.first_failure;
    injectivity["first_failure"] = {{"m", f.m}, {"n", f.n}, {"smallest_singular", to_json(f.smallest_singular)}};
  } else {
    injectivity["first_failure"] = nullptr;
  }
  j["kernel_injectivity"] = std::move(injectivity);

  Json verdicts = Json::array();
  for (const auto& v : report.verdicts) verdicts.push_back(to_json(v));
  j["verdicts"] = std::move(verdicts);

  Json diagram;
  Json arrows = Json::array();
  for (const auto& [from, to] : diagram_arrows()) arrows.push_back({std::string(to_string(from)), std::string(to_string(to))});
  diagram["arrows"] = std::move(arrows);
  diagram["violations"] = diagram_violations(report.verdicts);
  j["diagram"] = std::move(diagram);
  j["internal_errors"] = report.internal_errors;

  if (!expectations.empty()) {
    Json list = Json::array();
    for (const auto& o : expectations) list.push_back(expectation_json(o));
    j["expectations"] = std::move(list);
  }
  if (!references.empty()) {
    Json list = Json::array();
    for (const auto& [cert, result] : references) list.push_back({{"certificate", to_json(cert)}, {"verification", to_json(result)}});
    j["reference_certificates"] = std::move(list);
  }
  j["gain_table"] = report.table ? to_json(*report.table) : Json(nullptr);
  return j;
}

std::string gain_table_csv(const GainTable& table) {
  std::ostringstream os;
  os << "m,n";
  for (const char* g : {"gP", "qQ"}) os << ',' << g << "_log2_lo," << g << "_log2_hi," << g << "_lo," << g << "_hi";
  os << ",GP_log2,GP,HB_log2,HB";
  os << ",hB_log2_lo,hB_log2_hi,hB_lo,hB_hi\n";
  for (const auto& r : table.rows) {
    os << r.m << ',' << r.n;
    csv_gain(os, r.gP);
    csv_gain(os, r.qQ);
    csv_scalar(os, r.GP);
    csv_scalar(os, r.HB);
    csv_gain(os, r.hB);
    os << '\n';
  }
  return os.str();
}

}  // namespace expsplit
