#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "expsplit/commands.hpp"
#include "expsplit/errors.hpp"

namespace {

struct Flags {
  std::uint64_t window = 0;
  std::string norm;
  double N_cap = 1e3;
  double tol = expsplit::kDefaultTol;
  std::uint64_t seed = 1;
  std::string format = "json";
  std::string out;
  std::string cert;
  std::string notion;
  std::string target;
};

expsplit::RunConfig to_config(const Flags& f) {
  expsplit::RunConfig c;
  c.target = f.target;
  if (f.window != 0) c.window = f.window;
  if (!f.norm.empty()) c.norm = expsplit::parse_norm(f.norm);
  c.N_cap = f.N_cap;
  c.tol = f.tol;
  c.seed = f.seed;
  c.format = expsplit::parse_format(f.format);
  c.out = f.out;
  c.certificate_path = f.cert;
  if (!f.notion.empty()) c.notion = expsplit::parse_concept(f.notion);
  return c;
}

void add_run_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--window", f.window, "Window size M (pairs 0 <= n <= m <= M)");
  cmd->add_option("--norm", f.norm, "Norm override: sup, one or two");
  cmd->add_option("--ncap", f.N_cap, "Cap on N for fitted certificates");
  cmd->add_option("--tol", f.tol, "Comparison tolerance (log2 domain)");
  cmd->add_option("--seed", f.seed, "Seed for sampled gain brackets and random variants");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exponential splitting analysis of nonautonomous linear difference systems"};
  app.require_subcommand(1);
  Flags flags;
  app.add_option("--format", flags.format, "Output format: json or csv");
  app.add_option("--out", flags.out, "Output file (default stdout)");

  app.add_subcommand("list", "List the built-in corpus");
  auto* show = app.add_subcommand("show", "Print a corpus entry or definition as JSON");
  show->add_option("target", flags.target, "Corpus name or definition file")->required();
  add_run_flags(show, flags);

  const std::pair<const char*, const char*> runs[] = {
      {"analyze", "Full report: prerequisites, gain table, verdicts"},
      {"verify", "Check certificates on the window"},
      {"fit", "Fit certificates by linear programming"},
      {"refute", "Search for the first violation of each certificate"},
      {"identities", "Cocycle, shared-range and skew-evolution identity residuals"},
  };
  for (const auto& [name, help] : runs) {
    auto* cmd = app.add_subcommand(name, help);
    cmd->add_option("target", flags.target, "Corpus name (name:key=value,...) or definition file")->required();
    add_run_flags(cmd, flags);
    if (std::string(name) == "verify" || std::string(name) == "refute") {
      cmd->add_option("--cert", flags.cert, "Certificate JSON file")->required();
    }
    if (std::string(name) == "fit") cmd->add_option("--concept", flags.notion, "Fit one concept only");
  }
  for (auto* sub : app.get_subcommands({})) {
    sub->add_option("--format", flags.format, "Output format: json or csv");
    sub->add_option("--out", flags.out, "Output file (default stdout)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : expsplit::kExitConfig;
  }

  expsplit::CommandResult result;
  try {
    result = expsplit::run_command(app.get_subcommands().front()->get_name(), to_config(flags));
  } catch (const expsplit::ConfigError& e) {
    result.exit_code = expsplit::kExitConfig;
    result.diagnostic = e.what();
  }
  if (!result.diagnostic.empty()) std::cerr << "expsplit: " << result.diagnostic << '\n';
  if (!result.output.empty()) {
    if (flags.out.empty()) {
      std::cout << result.output;
    } else {
      std::ofstream file(flags.out, std::ios::binary);
      if (!file || !(file << result.output)) {
        std::cerr << "expsplit: cannot write '" << flags.out << "'\n";
        return expsplit::kExitConfig;
      }
    }
  }
  return result.exit_code;
}
