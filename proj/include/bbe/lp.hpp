#pragma once

#include <Eigen/Dense>

namespace bbe {

// Small dense linear programs: maximise c'x subject to
//   A_ub x <= b_ub,  A_eq x = b_eq,  x >= 0.
// Two-phase tableau simplex with Bland's rule; sized for the handful of
// variables that appear in 3x3 games.
struct LPResult {
  enum class Status { Optimal, Infeasible, Unbounded };
  Status status = Status::Infeasible;
  double value = 0.0;
  Eigen::VectorXd x;
  bool optimal() const { return status == Status::Optimal; }
};

LPResult solveLP(const Eigen::VectorXd& c, const Eigen::MatrixXd& A_ub, const Eigen::VectorXd& b_ub,
                 const Eigen::MatrixXd& A_eq, const Eigen::VectorXd& b_eq);

}  // namespace bbe
