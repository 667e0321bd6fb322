#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "expsplit/projections.hpp"

namespace expsplit {

/// a_n = n / (1 + 2 cos^2(n pi / 2)) in units of 1/3: 3n for odd n, n for even n.
std::int64_t a_thirds(std::uint64_t n);

/// 2^(k/3).
Real exp2_thirds(std::int64_t k);

std::vector<std::string> builtin_system_names();
std::vector<std::string> builtin_projection_names();

/// Builtin step rules: identity {dim}, example11_r3, example2_r2, example3_r2,
/// example4_block {blocks}, random_reversible {seed, dim}. The norm defaults
/// to sup (two for random_reversible). Throws ConfigError on unknown names or
/// bad parameters.
SystemDef builtin_system(const std::string& name, const Params& params = {},
                         std::optional<NormKind> norm = std::nullopt);

/// Builtin projection rules: example11_r3, example2_r2 (also example3_r2),
/// example4_block {blocks}, random_reversible {seed, dim, rank}.
ProjectionDef builtin_projection(const std::string& name, const Params& params = {});

/// R_n = P_n + P_n W_n Q_n with W_n uniform in [-scale, scale], seeded by
/// (seed, n). Range R_n = Range P_n and R_n^2 = R_n by construction.
ProjectionDef shared_range_variant(const ProjectionDef& p, std::uint64_t seed, double scale = 1.0);

/// Rebuilds a projection sequence from its rule description.
ProjectionDef projection_from_spec(const RuleSpec& spec);

/// Deterministic generator for stream `stream` at index n.
std::mt19937_64 seeded_rng(std::uint64_t seed, std::uint64_t n, std::uint64_t stream);

/// Haar-like random orthogonal matrix.
Mat random_orthogonal(std::mt19937_64& rng, Index dim);

/// U diag(s) V^T with s_i = 2^u, u uniform in [-1, 1]; condition number <= 4.
Mat random_well_conditioned(std::mt19937_64& rng, Index dim);

}  // namespace expsplit
