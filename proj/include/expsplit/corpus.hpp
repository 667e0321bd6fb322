#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "expsplit/classify.hpp"

namespace expsplit {

/// A machine-checkable expected outcome of a corpus entry.
struct Expectation {
  enum class Kind {
    invariant,           // invariance_check passes on the default window
    strong_invariance,   // strong_invariance_check(m, n) has verdict `expected`
    all_iso,             // every window pair is an isomorphism on the kernels
    kernel_not_attained, // `vector` lies in Ker P_m but not in A_m^n Ker P_n
    cocycle,             // cocycle residual <= bound
    trend,               // exp_bound_fit trend is `expected`
    verdict,             // classify verdict of `notion` is `expected`
  };

  Kind kind = Kind::invariant;
  std::string expected;
  std::string note;
  std::uint64_t m = 0, n = 0;
  Concept notion = Concept::ES;
  std::vector<double> vector;
  double bound = 0.0;

  /// Short human label such as "verdict UES".
  std::string label() const;
};

struct CorpusEntry {
  std::string name;
  std::string description;
  SystemDef system;
  ProjectionDef projection;
  PairWindow default_window;
  std::vector<Expectation> expected;
  std::vector<Certificate> reference_certificates;
};

/// Corpus names: identity_r2, example11_r3, example2_r2, example3_r2,
/// example4_block, random_reversible.
std::vector<std::string> corpus_names();

/// Throws ConfigError for unknown names. Accepted params: example4_block
/// {blocks}; random_reversible {seed, dim, window}.
CorpusEntry builtin(const std::string& name, const Params& params = {});

/// Reversible system with condition number <= 4 per step and an invariant
/// projection of rank 1 + seed mod (dim - 1). dim <= 8.
CorpusEntry random_reversible(std::uint64_t seed, Index dim, std::uint64_t window = 10);

struct ExpectationOutcome {
  Expectation expectation;
  std::string observed;
  bool passed = false;
};

/// Evaluates every expectation on the entry's default window. Verdict checks
/// reuse `report` when given, otherwise run classify with default options.
std::vector<ExpectationOutcome> check_expectations(const CorpusEntry& entry,
                                                   const AnalysisReport* report = nullptr);

/// Default classify options for an entry: its window, default N_cap and tol.
ClassifyOptions default_options(const CorpusEntry& entry);

}  // namespace expsplit
