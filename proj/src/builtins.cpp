#include "expsplit/builtins.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "expsplit/errors.hpp"

namespace expsplit {

namespace {

void check_params(const std::string& name, const Params& params, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : params) {
    if (!allowed.count(key)) throw ConfigError("builtin '" + name + "' has no parameter '" + key + "'");
    if (!std::isfinite(value)) throw ConfigError("parameter '" + key + "' must be finite");
  }
}

std::int64_t int_param(const Params& params, const std::string& key, std::int64_t fallback, std::int64_t lo,
                       std::int64_t hi) {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  const double v = it->second;
  if (v != std::floor(v) || v < static_cast<double>(lo) || v > static_cast<double>(hi)) {
    throw ConfigError("parameter '" + key + "' must be an integer in [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "]");
  }
  return static_cast<std::int64_t>(v);
}

// Two by two block c_P P_n + c_Q Q_{n+1} with P_k = [[1, 2^{e_k} - 1], [0, 0]],
// assembled against the common scale 2^{e_{n+1}} so nothing overflows.
ScaledMatrix split_step(const Real& c_p, const Real& c_q, std::int64_t e_n, std::int64_t e_next) {
  const std::int64_t shift = -e_next;
  const Real one(1);
  Mat m = Mat::Zero(2, 2);
  m(0, 0) = ldexp2(c_p, shift);
  m(0, 1) = c_p * (ldexp2(one, e_n - e_next) - ldexp2(one, shift)) - c_q * (1 - ldexp2(one, shift));
  m(1, 1) = ldexp2(c_q, shift);
  return ScaledMatrix(std::move(m), e_next);
}

// P = [[1, 2^e - 1], [0, 0]].
ScaledMatrix split_projector(std::int64_t e) {
  const Real tiny = ldexp2(Real(1), -e);
  Mat m = Mat::Zero(2, 2);
  m(0, 0) = tiny;
  m(0, 1) = 1 - tiny;
  return ScaledMatrix(std::move(m), e);
}

ScaledMatrix block_diagonal(const ScaledMatrix& block, Index copies) {
  if (copies == 1) return block;
  const Index b = block.dim();
  Mat m = Mat::Zero(b * copies, b * copies);
  for (Index i = 0; i < copies; ++i) m.block(i * b, i * b, b, b) = block.mantissa();
  return ScaledMatrix(std::move(m), block.exponent());
}

std::int64_t square_exponent(std::uint64_t n) {
  if (n > 127) throw DomainError("index too large for the 2^{n^2} family (n <= 127)");
  return static_cast<std::int64_t>(n * n);
}

std::int64_t linear_exponent(std::uint64_t n) {
  if (n > 16000) throw DomainError("index too large for the 2^n family");
  return static_cast<std::int64_t>(n);
}

Mat orthonormal_columns(const Mat& m) {
  Eigen::HouseholderQR<Mat> qr(m);
  return qr.householderQ() * Mat::Identity(m.rows(), m.cols());
}

SystemDef make_system(Index dim, NormKind norm, std::string name, Params params, MatrixRule rule) {
  SystemDef sys;
  sys.dim = dim;
  sys.norm = norm;
  sys.spec.builtin = std::move(name);
  sys.spec.params = std::move(params);
  sys.rule = std::move(rule);
  return sys;
}

ProjectionDef make_projection(Index dim, std::string name, Params params, MatrixRule rule) {
  ProjectionDef p;
  p.dim = dim;
  p.spec.builtin = std::move(name);
  p.spec.params = std::move(params);
  p.rule = std::move(rule);
  return p;
}

}  // namespace

std::int64_t a_thirds(std::uint64_t n) {
  const auto v = static_cast<std::int64_t>(n);
  return n % 2 == 1 ? 3 * v : v;
}

Real exp2_thirds(std::int64_t k) {
  const std::int64_t whole = k >= 0 ? k / 3 : -((-k + 2) / 3);
  const std::int64_t rest = k - 3 * whole;
  return ldexp2(exp2r(Real(rest) / 3), whole);
}

std::vector<std::string> builtin_system_names() {
  return {"identity", "example11_r3", "example2_r2", "example3_r2", "example4_block", "random_reversible"};
}

std::vector<std::string> builtin_projection_names() {
  return {"example11_r3", "example2_r2", "example3_r2", "example4_block", "random_reversible",
          "shared_range_variant"};
}

std::mt19937_64 seeded_rng(std::uint64_t seed, std::uint64_t n, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(n >> 32),
                    static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

Mat random_orthogonal(std::mt19937_64& rng, Index dim) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Mat g(dim, dim);
  for (Index j = 0; j < dim; ++j)
    for (Index i = 0; i < dim; ++i) g(i, j) = Real(normal(rng));
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < dim; ++j) {
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  }
  return q;
}

Mat random_well_conditioned(std::mt19937_64& rng, Index dim) {
  const Mat u = random_orthogonal(rng, dim);
  const Mat v = random_orthogonal(rng, dim);
  std::uniform_real_distribution<double> expo(-1.0, 1.0);
  Vec s(dim);
  for (Index i = 0; i < dim; ++i) s(i) = exp2r(Real(expo(rng)));
  return u * s.asDiagonal() * v.transpose();
}

SystemDef builtin_system(const std::string& name, const Params& params, std::optional<NormKind> norm) {
  const NormKind sup = norm.value_or(NormKind::sup);
  if (name == "identity") {
    check_params(name, params, {"dim"});
    const Index dim = int_param(params, "dim", 2, 1, 64);
    return make_system(dim, sup, name, params, [dim](std::uint64_t) { return ScaledMatrix::identity(dim); });
  }
  if (name == "example11_r3") {
    check_params(name, params, {});
    return make_system(3, sup, name, params, [](std::uint64_t n) {
      Mat m = Mat::Zero(3, 3);
      m(0, 0) = 2;
      m(1, 1) = n == 0 ? 0 : 4;
      m(2, 2) = 4;
      return ScaledMatrix(std::move(m));
    });
  }
  if (name == "example2_r2") {
    check_params(name, params, {});
    return make_system(2, sup, name, params, [](std::uint64_t n) {
      return split_step(2, 4, square_exponent(n), square_exponent(n + 1));
    });
  }
  if (name == "example3_r2") {
    check_params(name, params, {});
    return make_system(2, sup, name, params, [](std::uint64_t n) {
      const std::int64_t d = a_thirds(n + 1) - a_thirds(n);
      return split_step(exp2_thirds(-d), exp2_thirds(2 * d), square_exponent(n), square_exponent(n + 1));
    });
  }
  if (name == "example4_block") {
    check_params(name, params, {"blocks"});
    const Index blocks = int_param(params, "blocks", 1, 1, 32);
    return make_system(2 * blocks, sup, name, params, [blocks](std::uint64_t n) {
      const std::int64_t d = a_thirds(n + 1) - a_thirds(n);
      return block_diagonal(
          split_step(exp2_thirds(-d), exp2_thirds(2 * d), linear_exponent(n), linear_exponent(n + 1)), blocks);
    });
  }
  if (name == "random_reversible") {
    check_params(name, params, {"seed", "dim"});
    const auto seed = static_cast<std::uint64_t>(int_param(params, "seed", 1, 0, std::int64_t{1} << 52));
    const Index dim = int_param(params, "dim", 3, 1, 8);
    SystemDef sys = make_system(dim, norm.value_or(NormKind::two), name, params, [seed, dim](std::uint64_t n) {
      auto rng = seeded_rng(seed, n, 1);
      return ScaledMatrix(random_well_conditioned(rng, dim));
    });
    sys.reversible_hint = true;
    return sys;
  }
  throw ConfigError("unknown builtin system '" + name + "'");
}

ProjectionDef builtin_projection(const std::string& name, const Params& params) {
  if (name == "example11_r3") {
    check_params(name, params, {});
    return make_projection(3, name, params, [](std::uint64_t n) {
      Mat m = Mat::Zero(3, 3);
      m(0, 0) = 1;
      if (n == 0) {
        m(1, 1) = 1;
      } else {
        m(0, 1) = ldexp2(Real(1), 1 - static_cast<std::int64_t>(n));
      }
      return ScaledMatrix(std::move(m));
    });
  }
  if (name == "example2_r2" || name == "example3_r2") {
    check_params(name, params, {});
    return make_projection(2, name, params, [](std::uint64_t n) { return split_projector(square_exponent(n)); });
  }
  if (name == "example4_block") {
    check_params(name, params, {"blocks"});
    const Index blocks = int_param(params, "blocks", 1, 1, 32);
    return make_projection(2 * blocks, name, params, [blocks](std::uint64_t n) {
      return block_diagonal(split_projector(linear_exponent(n)), blocks);
    });
  }
  if (name == "random_reversible") {
    check_params(name, params, {"seed", "dim", "rank"});
    const auto seed = static_cast<std::uint64_t>(int_param(params, "seed", 1, 0, std::int64_t{1} << 52));
    const Index dim = int_param(params, "dim", 3, 1, 8);
    const Index fallback_rank = dim == 1 ? 1 : 1 + static_cast<Index>(seed % static_cast<std::uint64_t>(dim - 1));
    const Index rank = int_param(params, "rank", fallback_rank, 0, dim);
    SystemDef sys = builtin_system("random_reversible", {{"seed", static_cast<double>(seed)},
                                                         {"dim", static_cast<double>(dim)}});
    auto rng = seeded_rng(seed, 0, 2);
    const Mat basis = random_well_conditioned(rng, dim);
    return make_projection(dim, name, params, [sys = std::move(sys), basis, dim, rank](std::uint64_t n) {
      // P_n = A_n^0 P_0 (A_n^0)^{-1}, built from the transported range and kernel.
      const Mat a = evolution(sys, n, 0).dense();
      Mat frame(dim, dim);
      if (rank > 0) frame.leftCols(rank) = orthonormal_columns(a * basis.leftCols(rank));
      if (rank < dim) frame.rightCols(dim - rank) = orthonormal_columns(a * basis.rightCols(dim - rank));
      Vec diag = Vec::Zero(dim);
      diag.head(rank).setOnes();
      return ScaledMatrix(Mat(frame * diag.asDiagonal() * frame.inverse()));
    });
  }
  if (name == "shared_range_variant") {
    throw ConfigError("shared_range_variant needs a base projection");
  }
  throw ConfigError("unknown builtin projection '" + name + "'");
}

ProjectionDef shared_range_variant(const ProjectionDef& p, std::uint64_t seed, double scale) {
  ProjectionDef out;
  out.dim = p.dim;
  out.spec.builtin = "shared_range_variant";
  out.spec.params = {{"seed", static_cast<double>(seed)}, {"scale", scale}};
  out.spec.base = std::make_shared<RuleSpec>(p.spec);
  out.rule = [p, seed, scale](std::uint64_t n) {
    const ScaledMatrix pn = projection(p, n);
    const ScaledMatrix qn = ScaledMatrix::identity(p.dim) - pn;
    auto rng = seeded_rng(seed, n, 3);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    Mat w(p.dim, p.dim);
    for (Index j = 0; j < p.dim; ++j)
      for (Index i = 0; i < p.dim; ++i) w(i, j) = Real(scale * unit(rng));
    if (scale == 0) return pn;
    return pn + pn * ScaledMatrix(std::move(w)) * qn;
  };
  return out;
}

ProjectionDef projection_from_spec(const RuleSpec& spec) {
  if (spec.builtin.empty()) return explicit_projection(spec.matrices);
  if (spec.builtin == "shared_range_variant") {
    if (!spec.base) throw ConfigError("shared_range_variant needs a base projection");
    Params rest = spec.params;
    check_params(spec.builtin, rest, {"seed", "scale"});
    const auto seed = static_cast<std::uint64_t>(int_param(rest, "seed", 1, 0, std::int64_t{1} << 52));
    const auto scale_it = rest.find("scale");
    const double scale = scale_it == rest.end() ? 1.0 : scale_it->second;
    return shared_range_variant(projection_from_spec(*spec.base), seed, scale);
  }
  return builtin_projection(spec.builtin, spec.params);
}

}  // namespace expsplit
