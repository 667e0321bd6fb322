#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "expsplit/gains.hpp"
#include "expsplit/invariance.hpp"

namespace expsplit {

/// Gains of one window pair (m, n), all in log2.
struct GainRow {
  std::uint64_t m = 0, n = 0;
  Gain gP;                   // sup-gain of A_m^n on Range P_n
  Gain qQ;                   // inf-gain of A_m^n on Range Q_n
  LogScalar GP;              // ||A_m^n P_n||
  std::optional<LogScalar> HB;  // ||B_m^n Q_m||, strongly invariant only
  std::optional<Gain> hB;       // sup-gain of B_m^n on Range Q_m, strongly invariant only
};

struct GainTable {
  PairWindow window;
  NormKind norm = NormKind::sup;
  std::vector<GainRow> rows;       // window order
  std::vector<LogScalar> p_norms;  // ||P_n||, n = 0..M
  std::vector<LogScalar> q_norms;  // ||Q_n||
  bool strongly_invariant = false;
  std::optional<IsoReport> strong_failure;  // first non-iso pair

  const GainRow& at(std::uint64_t m, std::uint64_t n) const;
  bool has_skew_columns() const { return strongly_invariant; }
  /// True when some sup/one-norm gain is a bracket rather than a value.
  bool has_brackets() const;
};

GainTable gain_table(PairContext& ctx, const PairWindow& window, double tol, const GainOptions& options = {});
GainTable gain_table(const SystemDef& sys, const ProjectionDef& p, const PairWindow& window, double tol,
                     const GainOptions& options = {});

}  // namespace expsplit
