#include "bbe/game.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bbe {

Strategy Strategy::pure(int n, int action) {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  w[action] = 1.0;
  return Strategy(w);
}

Strategy Strategy::uniform(int n) { return Strategy(Eigen::VectorXd::Constant(n, 1.0 / n)); }

double distance(const Strategy& a, const Strategy& b) {
  if (a.mixed() != b.mixed()) throw ValidationError("comparing scalar and mixed strategies");
  if (!a.mixed()) return std::abs(a.x - b.x);
  if (a.w.size() != b.w.size()) throw ValidationError("comparing mixed strategies of different sizes");
  return (a.w - b.w).lpNorm<Eigen::Infinity>();
}

std::string describe(const Strategy& s) {
  std::ostringstream os;
  if (!s.mixed()) {
    os << formatNumber(s.x);
    return os.str();
  }
  os << '(';
  for (int k = 0; k < s.w.size(); ++k) os << (k ? ", " : "") << formatNumber(s.w[k]);
  os << ')';
  return os.str();
}

double FiniteGame::u(int i, const Eigen::VectorXd& own_w, const Eigen::VectorXd& opp_w) const {
  return i == 0 ? own_w.dot(payoff[0] * opp_w) : opp_w.dot(payoff[1] * own_w);
}

int FiniteGame::actionIndex(int i, const std::string& label) const {
  for (int k = 0; k < n(i); ++k)
    if (actions[i][k] == label) return k;
  throw ValidationError("unknown action '" + label + "' for player " + std::to_string(i + 1));
}

const std::string& gameName(const Game& g) {
  return std::visit([](const auto& x) -> const std::string& { return x.name; }, g);
}

double payoff(const Game& g, int i, const Strategy& own, const Strategy& opp) {
  if (isInterval(g)) return asInterval(g).u(i, own.x, opp.x);
  return asFinite(g).u(i, own.w, opp.w);
}

bool checkOwnConcavity(const IntervalGame& g, int i, int grid) {
  const int j = other(i);
  double range = 0.0;
  std::vector<double> vals;
  for (int a = 0; a <= grid; ++a)
    for (int b = 0; b <= grid; ++b)
      vals.push_back(g.u(i, g.lo[i] + g.width(i) * a / grid, g.lo[j] + g.width(j) * b / grid));
  auto [mn, mx] = std::minmax_element(vals.begin(), vals.end());
  range = *mx - *mn;
  const double tol = 1e-9 * std::max(1.0, range);
  for (int b = 0; b <= grid; ++b) {
    double sj = g.lo[j] + g.width(j) * b / grid;
    for (int a = 1; a < grid; ++a)
      for (int h = 1; a - h >= 0 && a + h <= grid; h *= 2) {
        double xm = g.lo[i] + g.width(i) * a / grid;
        double xl = g.lo[i] + g.width(i) * (a - h) / grid;
        double xr = g.lo[i] + g.width(i) * (a + h) / grid;
        if (g.u(i, xm, sj) < 0.5 * (g.u(i, xl, sj) + g.u(i, xr, sj)) - tol) return false;
      }
  }
  return true;
}

bool checkOwnQuasiConcavity(const IntervalGame& g, int i, int grid) {
  const int j = other(i);
  std::vector<double> v(grid + 1);
  for (int b = 0; b <= 32; ++b) {
    double sj = g.lo[j] + g.width(j) * b / 32;
    for (int a = 0; a <= grid; ++a) v[a] = g.u(i, g.lo[i] + g.width(i) * a / grid, sj);
    const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
    const double tol = 1e-9 * std::max(1.0, *mx - *mn);
    const int peak = static_cast<int>(mx - v.begin());
    for (int a = 1; a <= peak; ++a)
      if (v[a] < v[a - 1] - tol) return false;
    for (int a = peak + 1; a <= grid; ++a)
      if (v[a] > v[a - 1] + tol) return false;
  }
  return true;
}

IntervalGame makeIntervalGame(std::string name, std::array<double, 2> lo, std::array<double, 2> hi,
                              std::array<std::string, 2> payoffs, Params params) {
  IntervalGame g;
  g.name = std::move(name);
  g.lo = lo;
  g.hi = hi;
  g.params = std::move(params);
  for (int i = 0; i < 2; ++i) {
    if (!(lo[i] < hi[i])) throw ValidationError("interval of player " + std::to_string(i + 1) + " is empty");
    g.source[i] = payoffs[i];
    try {
      g.payoff[i] = parseExpr(payoffs[i], g.params);
    } catch (const ParseError& e) {
      throw ParseError("payoff " + std::to_string(i + 1) + ": " + e.what(), e.line(), e.column());
    }
  }
  // Payoffs must evaluate on the whole rectangle; a 65x65 lattice stands in
  // for the continuum.
  for (int i = 0; i < 2; ++i)
    for (int a = 0; a <= 64; ++a)
      for (int b = 0; b <= 64; ++b) {
        double s1 = lo[0] + (hi[0] - lo[0]) * a / 64, s2 = lo[1] + (hi[1] - lo[1]) * b / 64;
        double v;
        try {
          v = g.payoff[i](s1, s2);
        } catch (const EvalError& e) {
          throw ValidationError("payoff " + std::to_string(i + 1) + " fails at (" + formatNumber(s1) + ", " +
                                formatNumber(s2) + "): " + e.what());
        }
        if (!std::isfinite(v)) throw ValidationError("payoff " + std::to_string(i + 1) + " is not finite");
      }
  g.concave = checkOwnConcavity(g, 0) && checkOwnConcavity(g, 1);
  g.quasiConcave = g.concave || (checkOwnQuasiConcavity(g, 0) && checkOwnQuasiConcavity(g, 1));
  return g;
}

FiniteGame makeFiniteGame(std::string name, std::array<std::vector<std::string>, 2> actions,
                          Eigen::MatrixXd payoff1, Eigen::MatrixXd payoff2) {
  FiniteGame g;
  g.name = std::move(name);
  g.actions = std::move(actions);
  for (int i = 0; i < 2; ++i)
    if (g.actions[i].empty()) throw ValidationError("player " + std::to_string(i + 1) + " has no actions");
  const long n1 = static_cast<long>(g.actions[0].size()), n2 = static_cast<long>(g.actions[1].size());
  if (payoff1.rows() != n1 || payoff1.cols() != n2 || payoff2.rows() != n1 || payoff2.cols() != n2)
    throw ValidationError("payoff matrices must be " + std::to_string(n1) + "x" + std::to_string(n2));
  if (!payoff1.allFinite() || !payoff2.allFinite()) throw ValidationError("payoff matrices must be finite");
  g.payoff = {std::move(payoff1), std::move(payoff2)};
  return g;
}

IntervalGame toIntervalForm(const FiniteGame& g) {
  if (g.n(0) != 2 || g.n(1) != 2) throw ValidationError("interval form needs exactly two actions per player");
  std::array<std::string, 2> exprs;
  for (int i = 0; i < 2; ++i) {
    const Eigen::MatrixXd& m = g.payoff[i];
    std::ostringstream os;
    os.precision(17);
    os << "s1*s2*(" << m(0, 0) << ") + s1*(1-s2)*(" << m(0, 1) << ") + (1-s1)*s2*(" << m(1, 0)
       << ") + (1-s1)*(1-s2)*(" << m(1, 1) << ")";
    exprs[i] = os.str();
  }
  return makeIntervalGame(g.name, {0.0, 0.0}, {1.0, 1.0}, exprs);
}

void validateStrategy(const Game& g, int i, const Strategy& s) {
  if (isInterval(g)) {
    const auto& ig = asInterval(g);
    if (s.mixed()) throw ValidationError("interval game expects a scalar strategy");
    if (!(s.x >= ig.lo[i] - 1e-12 && s.x <= ig.hi[i] + 1e-12))
      throw DomainError("strategy " + formatNumber(s.x) + " outside [" + formatNumber(ig.lo[i]) + ", " +
                        formatNumber(ig.hi[i]) + "] for player " + std::to_string(i + 1));
    return;
  }
  const auto& fg = asFinite(g);
  if (!s.mixed() || s.w.size() != fg.n(i))
    throw ValidationError("player " + std::to_string(i + 1) + " expects a probability vector of size " +
                          std::to_string(fg.n(i)));
  if (s.w.minCoeff() < -kSimplexTol || std::abs(s.w.sum() - 1.0) > kSimplexTol)
    throw ValidationError("weights must be nonnegative and sum to 1");
}

}  // namespace bbe
