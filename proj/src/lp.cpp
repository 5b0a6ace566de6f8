#include "bbe/lp.hpp"

#include <cmath>
#include <vector>

namespace bbe {

namespace {

constexpr double kPivotTol = 1e-11;

struct Tableau {
  Eigen::MatrixXd t;          // m x (cols + 1), last column is the rhs
  std::vector<int> basis;
  int cols = 0;

  void pivot(int r, int c) {
    t.row(r) /= t(r, c);
    for (int k = 0; k < t.rows(); ++k)
      if (k != r && t(k, c) != 0.0) t.row(k) -= t(k, c) * t.row(r);
    basis[r] = c;
  }

  // Maximises obj'x over columns allowed[c]; false if unbounded.
  bool run(const Eigen::VectorXd& obj, const std::vector<bool>& allowed) {
    const int m = static_cast<int>(t.rows());
    for (int iter = 0; iter < 5000; ++iter) {
      int enter = -1;
      for (int c = 0; c < cols && enter < 0; ++c) {
        if (!allowed[c]) continue;
        double z = obj[c];
        for (int r = 0; r < m; ++r) z -= obj[basis[r]] * t(r, c);
        if (z > 1e-10) enter = c;
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = 0.0;
      for (int r = 0; r < m; ++r) {
        if (t(r, enter) <= kPivotTol) continue;
        double ratio = t(r, cols) / t(r, enter);
        if (leave < 0 || ratio < best - 1e-12 || (std::abs(ratio - best) <= 1e-12 && basis[r] < basis[leave])) {
          leave = r;
          best = ratio;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    return true;
  }
};

}  // namespace

LPResult solveLP(const Eigen::VectorXd& c, const Eigen::MatrixXd& A_ub, const Eigen::VectorXd& b_ub,
                 const Eigen::MatrixXd& A_eq, const Eigen::VectorXd& b_eq) {
  const int n = static_cast<int>(c.size());
  const int mu = static_cast<int>(A_ub.rows()), me = static_cast<int>(A_eq.rows());
  const int m = mu + me;
  // Columns: x (n), slacks (mu), artificials (m).
  Tableau tab;
  tab.cols = n + mu + m;
  tab.t = Eigen::MatrixXd::Zero(m, tab.cols + 1);
  tab.basis.assign(m, 0);
  for (int r = 0; r < m; ++r) {
    double sign = 1.0, rhs;
    if (r < mu) {
      tab.t.row(r).head(n) = A_ub.row(r);
      tab.t(r, n + r) = 1.0;
      rhs = b_ub[r];
    } else {
      tab.t.row(r).head(n) = A_eq.row(r - mu);
      rhs = b_eq[r - mu];
    }
    if (rhs < 0) sign = -1.0;
    tab.t.row(r).head(n + mu) *= sign;
    tab.t(r, tab.cols) = sign * rhs;
    tab.t(r, n + mu + r) = 1.0;
    tab.basis[r] = n + mu + r;
  }

  LPResult res;
  std::vector<bool> all(tab.cols, true);
  Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(tab.cols);
  phase1.tail(m).setConstant(-1.0);
  tab.run(phase1, all);
  double infeas = 0.0;
  for (int r = 0; r < m; ++r)
    if (tab.basis[r] >= n + mu) infeas += tab.t(r, tab.cols);
  if (infeas > 1e-9) {
    res.status = LPResult::Status::Infeasible;
    return res;
  }
  // Drive zero-level artificials out of the basis where possible.
  for (int r = 0; r < m; ++r) {
    if (tab.basis[r] < n + mu) continue;
    for (int col = 0; col < n + mu; ++col)
      if (std::abs(tab.t(r, col)) > 1e-9) {
        tab.pivot(r, col);
        break;
      }
  }
  std::vector<bool> allowed(tab.cols, true);
  for (int col = n + mu; col < tab.cols; ++col) allowed[col] = false;
  Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(tab.cols);
  phase2.head(n) = c;
  if (!tab.run(phase2, allowed)) {
    res.status = LPResult::Status::Unbounded;
    return res;
  }
  res.status = LPResult::Status::Optimal;
  res.x = Eigen::VectorXd::Zero(n);
  for (int r = 0; r < m; ++r)
    if (tab.basis[r] < n) res.x[tab.basis[r]] = tab.t(r, tab.cols);
  res.value = c.dot(res.x);
  return res;
}

}  // namespace bbe
