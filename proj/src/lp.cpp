#include "expsplit/lp.hpp"

#include <cmath>
#include <limits>

#include "expsplit/errors.hpp"

namespace expsplit::lp {

namespace {

constexpr double kTol = 1e-9;
constexpr int kRefactorEvery = 64;
constexpr int kMaxIterations = 200000;

class DualSimplex {
 public:
  DualSimplex(const Eigen::MatrixXd& e, const Eigen::VectorXd& h, const Eigen::VectorXd& g)
      : e_(e), h_(h), g_(g), rows_(e.rows()), cols_(e.cols()) {
    basis_.resize(rows_);
    for (Eigen::Index i = 0; i < rows_; ++i) basis_[i] = cols_ + i;
    refactor();
  }

  // Returns false if the objective is unbounded below.
  bool run(bool phase_one) {
    for (;;) {
      if (++iterations_ > kMaxIterations) throw DomainError("linear program did not converge");
      if (iterations_ % kRefactorEvery == 0) refactor();
      const Eigen::RowVectorXd pi = basic_costs(phase_one).transpose() * binv_;
      Eigen::Index entering = -1;
      const Eigen::Index limit = phase_one ? cols_ + rows_ : cols_;
      for (Eigen::Index j = 0; j < limit; ++j) {
        if (is_basic(j)) continue;
        if (cost(j, phase_one) - pi.dot(column(j)) < -kTol) {
          entering = j;
          break;
        }
      }
      if (entering < 0) return true;
      const Eigen::VectorXd d = binv_ * column(entering);
      Eigen::Index leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < rows_; ++i) {
        if (d(i) <= kTol) continue;
        const double ratio = xb_(i) / d(i);
        if (ratio < best - kTol || (ratio <= best + kTol && leave >= 0 && basis_[i] < basis_[leave])) {
          best = std::min(best, ratio);
          leave = i;
        }
      }
      if (leave < 0) return false;
      pivot(leave, entering, d);
    }
  }

  // Pivots zero-level artificials out of the basis where possible.
  void drop_artificials() {
    for (Eigen::Index i = 0; i < rows_; ++i) {
      if (basis_[i] < cols_) continue;
      for (Eigen::Index j = 0; j < cols_; ++j) {
        if (is_basic(j)) continue;
        const Eigen::VectorXd d = binv_ * column(j);
        if (std::abs(d(i)) > kTol) {
          pivot(i, j, d);
          break;
        }
      }
    }
  }

  double artificial_sum() const {
    double s = 0.0;
    for (Eigen::Index i = 0; i < rows_; ++i)
      if (basis_[i] >= cols_) s += xb_(i);
    return s;
  }

  // Simplex multipliers of the phase-two objective.
  Eigen::VectorXd multipliers() const { return (basic_costs(false).transpose() * binv_).transpose(); }

  Eigen::VectorXd values() const {
    Eigen::VectorXd y = Eigen::VectorXd::Zero(cols_);
    for (Eigen::Index i = 0; i < rows_; ++i)
      if (basis_[i] < cols_) y(basis_[i]) = std::max(0.0, xb_(i));
    return y;
  }

  int iterations() const { return iterations_; }

 private:
  Eigen::VectorXd column(Eigen::Index j) const {
    if (j < cols_) return e_.col(j);
    return Eigen::VectorXd::Unit(rows_, j - cols_);
  }

  double cost(Eigen::Index j, bool phase_one) const {
    if (phase_one) return j >= cols_ ? 1.0 : 0.0;
    return j >= cols_ ? 0.0 : g_(j);
  }

  Eigen::VectorXd basic_costs(bool phase_one) const {
    Eigen::VectorXd c(rows_);
    for (Eigen::Index i = 0; i < rows_; ++i) c(i) = cost(basis_[i], phase_one);
    return c;
  }

  bool is_basic(Eigen::Index j) const {
    for (Eigen::Index b : basis_)
      if (b == j) return true;
    return false;
  }

  void pivot(Eigen::Index leave, Eigen::Index entering, const Eigen::VectorXd& d) {
    const double p = d(leave);
    binv_.row(leave) /= p;
    for (Eigen::Index i = 0; i < rows_; ++i) {
      if (i != leave) binv_.row(i) -= d(i) * binv_.row(leave);
    }
    basis_[leave] = entering;
    xb_ = binv_ * h_;
  }

  void refactor() {
    Eigen::MatrixXd b(rows_, rows_);
    for (Eigen::Index i = 0; i < rows_; ++i) b.col(i) = column(basis_[i]);
    binv_ = b.inverse();
    xb_ = binv_ * h_;
  }

  const Eigen::MatrixXd& e_;
  const Eigen::VectorXd& h_;
  const Eigen::VectorXd& g_;
  Eigen::Index rows_, cols_;
  std::vector<Eigen::Index> basis_;
  Eigen::MatrixXd binv_;
  Eigen::VectorXd xb_;
  int iterations_ = 0;
};

}  // namespace

Solution maximize(const Eigen::VectorXd& c, const std::vector<Constraint>& constraints) {
  const Eigen::Index d = c.size();
  const auto r = static_cast<Eigen::Index>(constraints.size());
  Eigen::MatrixXd e(d, r);
  Eigen::VectorXd g(r);
  for (Eigen::Index j = 0; j < r; ++j) {
    if (constraints[j].a.size() != d) throw DimensionMismatch("constraint length differs from objective");
    e.col(j) = constraints[j].a;
    g(j) = constraints[j].b;
  }
  Eigen::VectorXd h = c;
  Eigen::VectorXd sign = Eigen::VectorXd::Ones(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    if (h(i) < 0) {
      sign(i) = -1;
      h(i) = -h(i);
      e.row(i) = -e.row(i);
    }
  }

  Solution out;
  DualSimplex simplex(e, h, g);
  simplex.run(true);
  if (simplex.artificial_sum() > kTol * (1 + h.lpNorm<Eigen::Infinity>())) {
    out.status = Status::unbounded;
    out.iterations = simplex.iterations();
    return out;
  }
  simplex.drop_artificials();
  const bool bounded = simplex.run(false);
  out.iterations = simplex.iterations();
  if (!bounded) {
    out.status = Status::infeasible;
    return out;
  }
  out.status = Status::optimal;
  out.x = simplex.multipliers().cwiseProduct(sign);
  out.objective = c.dot(out.x);
  out.multipliers = simplex.values();
  return out;
}

}  // namespace expsplit::lp
