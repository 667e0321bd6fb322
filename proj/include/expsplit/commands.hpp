#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "expsplit/serialize.hpp"

namespace expsplit {

enum class OutputFormat { json, csv };
std::string_view to_string(OutputFormat f);
OutputFormat parse_format(std::string_view text);

/// One batch invocation of the command line tool.
struct RunConfig {
  std::string target;                   // corpus name or definition file path
  std::optional<std::uint64_t> window;  // default: the target's window, else 40
  std::optional<NormKind> norm;         // overrides the target's norm
  double N_cap = 1e3;
  double tol = kDefaultTol;
  std::uint64_t seed = 1;
  OutputFormat format = OutputFormat::json;
  std::string out;                  // empty writes to stdout
  std::string certificate_path;     // verify and refute
  std::optional<Concept> notion;    // fit: a single concept instead of all eight
};

inline constexpr std::uint64_t kMaxWindow = 400;

/// Throws ConfigError when a numeric field is out of range: 1 <= window <=
/// kMaxWindow, N_cap >= 1, 0 < tol <= 1e-2.
void validate(const RunConfig& config);

/// Exit codes of the command line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

struct CommandResult {
  int exit_code = kExitOk;
  std::string output;      // report body, written to --out or stdout
  std::string diagnostic;  // one line for stderr, empty on success
};

/// A resolved target: corpus entry or definition file.
struct Target {
  std::string name;
  SystemDef system;
  ProjectionDef projection;
  PairWindow window;
  std::optional<CorpusEntry> entry;  // corpus targets only
};

/// Throws ConfigError when the name is neither a corpus entry nor a readable
/// definition file.
Target resolve_target(const RunConfig& config);

CommandResult run_list(const RunConfig& config);
CommandResult run_show(const RunConfig& config);
CommandResult run_analyze(const RunConfig& config);
CommandResult run_verify(const RunConfig& config);
CommandResult run_fit(const RunConfig& config);
CommandResult run_refute(const RunConfig& config);
CommandResult run_identities(const RunConfig& config);

/// Dispatches by command name ("list", "show", ...); maps library errors to
/// exit codes.
CommandResult run_command(const std::string& command, const RunConfig& config);

}  // namespace expsplit
