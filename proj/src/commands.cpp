#include "expsplit/commands.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "expsplit/builtins.hpp"
#include "expsplit/errors.hpp"

namespace expsplit {

namespace {

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char ch) { return std::tolower(ch); });
  return out;
}

Json read_json_file(const std::string& path, const std::string& what) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + what + " '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("malformed JSON in " + what + " '" + path + "': " + e.what());
  }
}

/// "name" or "name:key=value,key=value".
std::pair<std::string, Params> split_target(const std::string& target) {
  const auto colon = target.find(':');
  if (colon == std::string::npos) return {target, {}};
  Params params;
  std::stringstream rest(target.substr(colon + 1));
  std::string item;
  while (std::getline(rest, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("target parameter '" + item + "' is not key=value");
    try {
      std::size_t used = 0;
      const double v = std::stod(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument(item);
      params[item.substr(0, eq)] = v;
    } catch (const std::logic_error&) {
      throw ConfigError("target parameter '" + item + "' has a non-numeric value");
    }
  }
  return {target.substr(0, colon), params};
}

bool is_corpus_name(const std::string& name) {
  const auto names = corpus_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

Json header(const std::string& command, const Target& target, const RunConfig& config) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["tool"] = "expsplit";
  j["command"] = command;
  j["target"] = target.name;
  j["window"] = target.window.M;
  j["norm"] = std::string(to_string(target.system.norm));
  j["tol"] = config.tol;
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

/// Gain table after checking the projections are valid and invariant.
GainTable checked_table(const Target& target, const RunConfig& config) {
  const IdempotencyResult valid = validate_projection(target.projection, target.window, config.tol,
                                                      target.system.norm);
  if (!valid.ok) {
    throw NotAProjector(valid.residual);
  }
  const InvarianceResult inv = invariance_check(target.system, target.projection, target.window, config.tol);
  if (!inv.ok) {
    throw DomainError("projections are not invariant at n = " + std::to_string(*inv.witness) + " (residual " +
                      format_number(inv.residual) + ")");
  }
  GainOptions gains;
  gains.seed = config.seed;
  return gain_table(target.system, target.projection, target.window, config.tol, gains);
}

std::vector<Certificate> load_certificates(const RunConfig& config) {
  if (config.certificate_path.empty()) throw ConfigError("this command needs --cert <file>");
  return certificates_from_json(read_json_file(config.certificate_path, "certificate file"));
}

void require_columns(const GainTable& table, const Certificate& cert) {
  if (cert.form == CertForm::strong && !table.has_skew_columns()) {
    const IsoReport& f = *table.strong_failure;
    throw NotStronglyInvariant(f.m, f.n, std::string(to_string(f.verdict)));
  }
}

void csv_witness(std::ostringstream& os, const std::optional<ViolationWitness>& w) {
  if (!w) {
    os << ",,,,";
    return;
  }
  os << ',' << w->m << ',' << w->n << ',' << to_string(w->tag) << ',' << format_number(w->lhs.log2()) << ','
     << format_number(w->rhs.log2());
}

void csv_certificate(std::ostringstream& os, const Certificate& c) {
  os << to_string(c.notion) << ',' << to_string(c.form) << ',' << format_number(c.log2_N) << ','
     << format_number(c.log2_c) << ',' << format_number(c.log2_a) << ',' << format_number(c.log2_b);
}

Json residual_block(const Json& residuals, double max, double tol) {
  Json j;
  j["residuals"] = residuals;
  j["max"] = max;
  j["ok"] = max <= tol;
  return j;
}

}  // namespace

std::string_view to_string(OutputFormat f) { return f == OutputFormat::json ? "json" : "csv"; }

OutputFormat parse_format(std::string_view text) {
  const std::string t = lower(text);
  if (t == "json") return OutputFormat::json;
  if (t == "csv") return OutputFormat::csv;
  throw ConfigError("unknown output format '" + std::string(text) + "' (expected json or csv)");
}

void validate(const RunConfig& config) {
  if (config.window && (*config.window < 1 || *config.window > kMaxWindow)) {
    throw ConfigError("window must lie in [1, " + std::to_string(kMaxWindow) + "]");
  }
  if (!(config.N_cap >= 1) || !std::isfinite(config.N_cap)) throw ConfigError("N_cap must be a finite number >= 1");
  if (!(config.tol > 0 && config.tol <= 1e-2)) throw ConfigError("tol must lie in (0, 1e-2]");
}

Target resolve_target(const RunConfig& config) {
  if (config.target.empty()) throw ConfigError("no target given");
  Target t;
  const auto [base, params] = split_target(config.target);
  if (is_corpus_name(base)) {
    CorpusEntry entry = builtin(base, params);
    t.name = config.target;
    t.system = entry.system;
    t.projection = entry.projection;
    t.window = entry.default_window;
    t.entry = std::move(entry);
  } else if (std::ifstream(config.target).good()) {
    Definition def = definition_from_json(read_json_file(config.target, "definition file"));
    t.name = def.name;
    t.system = std::move(def.system);
    t.projection = std::move(def.projection);
    t.window = def.window.value_or(PairWindow{40});
  } else {
    throw ConfigError("unknown target '" + config.target + "' (not a corpus entry or readable file)");
  }
  if (config.window) t.window = PairWindow{*config.window};
  if (config.norm) t.system.norm = *config.norm;
  return t;
}

CommandResult run_list(const RunConfig& config) {
  CommandResult r;
  if (config.format == OutputFormat::csv) {
    std::ostringstream os;
    os << "name,window,description\n";
    for (const auto& name : corpus_names()) {
      const CorpusEntry e = builtin(name);
      os << name << ',' << e.default_window.M << ",\"" << e.description << "\"\n";
    }
    r.output = os.str();
    return r;
  }
  Json list = Json::array();
  for (const auto& name : corpus_names()) {
    const CorpusEntry e = builtin(name);
    list.push_back({{"name", name}, {"window", e.default_window.M}, {"description", e.description}});
  }
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["corpus"] = std::move(list);
  r.output = dump(j);
  return r;
}

CommandResult run_show(const RunConfig& config) {
  if (config.format != OutputFormat::json) throw ConfigError("show writes JSON only");
  const Target t = resolve_target(config);
  CommandResult r;
  if (t.entry) {
    CorpusEntry entry = *t.entry;
    entry.system.norm = t.system.norm;
    entry.default_window = t.window;
    r.output = dump(corpus_entry_to_json(entry));
  } else {
    r.output = dump(definition_to_json(t.name, t.system, t.projection, t.window));
  }
  return r;
}

CommandResult run_analyze(const RunConfig& config) {
  const Target t = resolve_target(config);
  ClassifyOptions options;
  options.window = t.window;
  options.N_cap = config.N_cap;
  options.tol = config.tol;
  options.gains.seed = config.seed;
  const AnalysisReport report = classify(t.system, t.projection, options);

  CommandResult r;
  if (config.format == OutputFormat::csv) {
    if (!report.table) throw DomainError("no gain table: projections are not valid and invariant on the window");
    r.output = gain_table_csv(*report.table);
    return r;
  }

  std::vector<ExpectationOutcome> expectations;
  std::vector<std::pair<Certificate, VerifyResult>> reference;
  if (t.entry) {
    const bool defaults = t.window.M == t.entry->default_window.M && t.system.norm == t.entry->system.norm;
    if (defaults) expectations = check_expectations(*t.entry, &report);
    if (report.table) {
      for (const Certificate& cert : t.entry->reference_certificates) {
        if (cert.form == CertForm::strong && !report.table->has_skew_columns()) continue;
        reference.emplace_back(cert, verify_certificate(*report.table, cert, config.tol));
      }
    }
  }
  Json j = header("analyze", t, config);
  const Json body = report_to_json(report, expectations, reference);
  for (const auto& [key, value] : body.items()) {
    if (key != "schema_version") j[key] = value;
  }
  r.output = dump(j);
  return r;
}

CommandResult run_verify(const RunConfig& config) {
  const Target t = resolve_target(config);
  const std::vector<Certificate> certs = load_certificates(config);
  const GainTable table = checked_table(t, config);
  std::vector<VerifyResult> results;
  for (const Certificate& cert : certs) {
    require_columns(table, cert);
    results.push_back(verify_certificate(table, cert, config.tol));
  }

  CommandResult r;
  if (config.format == OutputFormat::csv) {
    std::ostringstream os;
    os << "concept,form,log2_N,log2_c,log2_a,log2_b,ok,inconclusive,witness_m,witness_n,tag,lhs_log2,rhs_log2,"
          "min_slack_log2\n";
    for (std::size_t i = 0; i < certs.size(); ++i) {
      csv_certificate(os, certs[i]);
      os << ',' << (results[i].ok ? "true" : "false") << ',' << (results[i].inconclusive ? "true" : "false");
      csv_witness(os, results[i].witness);
      os << ',' << format_number(results[i].min_slack) << '\n';
    }
    r.output = os.str();
    return r;
  }
  Json j = header("verify", t, config);
  Json list = Json::array();
  for (std::size_t i = 0; i < certs.size(); ++i) {
    list.push_back({{"certificate", to_json(certs[i])}, {"verification", to_json(results[i])}});
  }
  j["results"] = std::move(list);
  r.output = dump(j);
  return r;
}

CommandResult run_refute(const RunConfig& config) {
  const Target t = resolve_target(config);
  const std::vector<Certificate> certs = load_certificates(config);
  const GainTable table = checked_table(t, config);
  std::vector<std::optional<ViolationWitness>> witnesses;
  for (const Certificate& cert : certs) {
    require_columns(table, cert);
    witnesses.push_back(find_violation(table, cert, config.tol));
  }

  CommandResult r;
  if (config.format == OutputFormat::csv) {
    std::ostringstream os;
    os << "concept,form,log2_N,log2_c,log2_a,log2_b,refuted,witness_m,witness_n,tag,lhs_log2,rhs_log2\n";
    for (std::size_t i = 0; i < certs.size(); ++i) {
      csv_certificate(os, certs[i]);
      os << ',' << (witnesses[i] ? "true" : "false");
      csv_witness(os, witnesses[i]);
      os << '\n';
    }
    r.output = os.str();
    return r;
  }
  Json j = header("refute", t, config);
  Json list = Json::array();
  for (std::size_t i = 0; i < certs.size(); ++i) {
    list.push_back({{"certificate", to_json(certs[i])},
                    {"refuted", witnesses[i].has_value()},
                    {"witness", witnesses[i] ? to_json(*witnesses[i]) : Json(nullptr)}});
  }
  j["results"] = std::move(list);
  r.output = dump(j);
  return r;
}

CommandResult run_fit(const RunConfig& config) {
  const Target t = resolve_target(config);
  const GainTable table = checked_table(t, config);
  std::vector<Concept> notions;
  if (config.notion) {
    notions.push_back(*config.notion);
  } else {
    notions.assign(kAllConcepts.begin(), kAllConcepts.end());
  }

  struct Row {
    Concept notion;
    std::optional<FitResult> fit;
  };
  std::vector<Row> rows;
  for (Concept c : notions) {
    if (is_strong(c) && !table.has_skew_columns()) {
      if (config.notion) {
        const IsoReport& f = *table.strong_failure;
        throw NotStronglyInvariant(f.m, f.n, std::string(to_string(f.verdict)));
      }
      rows.push_back({c, std::nullopt});
      continue;
    }
    rows.push_back({c, fit_certificate(table, c, config.N_cap, config.tol)});
  }

  CommandResult r;
  if (config.format == OutputFormat::csv) {
    std::ostringstream os;
    os << "concept,status,log2_N,log2_c,log2_a,log2_b,infeasibility_log2\n";
    for (const Row& row : rows) {
      os << to_string(row.notion) << ',';
      if (!row.fit) {
        os << "skipped,,,,,\n";
        continue;
      }
      os << to_string(row.fit->status);
      if (row.fit->cert) {
        const Certificate& c = *row.fit->cert;
        os << ',' << format_number(c.log2_N) << ',' << format_number(c.log2_c) << ',' << format_number(c.log2_a)
           << ',' << format_number(c.log2_b);
      } else {
        os << ",,,,";
      }
      os << ',' << format_number(row.fit->infeasibility) << '\n';
    }
    r.output = os.str();
    return r;
  }
  Json j = header("fit", t, config);
  j["ncap"] = config.N_cap;
  Json list = Json::array();
  for (const Row& row : rows) {
    Json item;
    item["concept"] = std::string(to_string(row.notion));
    if (row.fit) {
      const Json fit = to_json(*row.fit);
      for (const auto& [key, value] : fit.items()) item[key] = value;
    } else {
      item["status"] = "skipped";
      item["note"] = "projections are not strongly invariant";
    }
    list.push_back(std::move(item));
  }
  j["fits"] = std::move(list);
  r.output = dump(j);
  return r;
}

CommandResult run_identities(const RunConfig& config) {
  const Target t = resolve_target(config);
  CommandResult r;

  const CocycleResult cocycle = cocycle_residual(t.system, t.window);
  const ProjectionDef variant = shared_range_variant(t.projection, config.seed);
  const SharedRangeResiduals shared =
      shared_range_identities(t.projection, variant, t.window, config.tol, t.system.norm);
  std::optional<SkewResiduals> skew;
  std::string skew_error;
  try {
    skew = skew_identity_suite(t.system, t.projection, t.window, config.tol);
  } catch (const NotStronglyInvariant& e) {
    skew_error = e.what();
    r.exit_code = kExitNumerical;
    r.diagnostic = skew_error;
  }

  if (config.format == OutputFormat::csv) {
    std::ostringstream os;
    os << "identity,residual\n";
    os << "cocycle," << format_number(cocycle.residual) << '\n';
    const std::pair<const char*, double> r_rows[] = {
        {"r1", shared.r1}, {"r2", shared.r2}, {"r3", shared.r3}, {"r4", shared.r4}};
    for (const auto& [name, value] : r_rows) os << name << ',' << format_number(value) << '\n';
    if (skew) {
      const std::pair<const char*, double> b_rows[] = {
          {"b1", skew->b1}, {"b2", skew->b2}, {"b3", skew->b3}, {"b4", skew->b4}, {"b5", skew->b5}};
      for (const auto& [name, value] : b_rows) os << name << ',' << format_number(value) << '\n';
    }
    r.output = os.str();
    return r;
  }

  Json j = header("identities", t, config);
  j["seed"] = config.seed;
  Json c;
  c["residual"] = cocycle.residual;
  c["worst"] = {cocycle.m, cocycle.n, cocycle.p};
  c["ok"] = cocycle.residual <= config.tol;
  j["cocycle"] = std::move(c);
  j["shared_range"] = residual_block(to_json(shared), shared.max(), config.tol);
  if (skew) {
    j["skew_evolution"] = residual_block(to_json(*skew), skew->max(), config.tol);
  } else {
    j["skew_evolution"] = {{"error", skew_error}};
  }
  r.output = dump(j);
  return r;
}

CommandResult run_command(const std::string& command, const RunConfig& config) {
  CommandResult r;
  try {
    validate(config);
    if (command == "list") return run_list(config);
    if (command == "show") return run_show(config);
    if (command == "analyze") return run_analyze(config);
    if (command == "verify") return run_verify(config);
    if (command == "fit") return run_fit(config);
    if (command == "refute") return run_refute(config);
    if (command == "identities") return run_identities(config);
    throw ConfigError("unknown command '" + command + "'");
  } catch (const ConfigError& e) {
    r.exit_code = kExitConfig;
    r.diagnostic = e.what();
  } catch (const DimensionMismatch& e) {
    r.exit_code = kExitConfig;
    r.diagnostic = e.what();
  } catch (const Error& e) {
    r.exit_code = kExitNumerical;
    r.diagnostic = e.what();
  }
  return r;
}

}  // namespace expsplit
