#pragma once

#include <vector>

#include <Eigen/Dense>

namespace expsplit::lp {

/// a . x <= b
struct Constraint {
  Eigen::VectorXd a;
  double b = 0.0;
};

enum class Status { optimal, infeasible, unbounded };

struct Solution {
  Status status = Status::infeasible;
  Eigen::VectorXd x;            // primal optimum
  double objective = 0.0;
  Eigen::VectorXd multipliers;  // one nonnegative dual value per constraint
  int iterations = 0;
};

/// maximize c . x subject to the constraints, x free.
///
/// Solved through its dual (minimize b . y, A^T y = c, y >= 0) by a two-phase
/// revised simplex with Bland's rule, which suits many constraints in few
/// variables. The primal point is recovered from the optimal dual basis.
Solution maximize(const Eigen::VectorXd& c, const std::vector<Constraint>& constraints);

}  // namespace expsplit::lp
