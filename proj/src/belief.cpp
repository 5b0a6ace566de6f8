#include "bbe/belief.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bbe/optimize.hpp"

namespace bbe {

const char* toString(BeliefKind k) {
  switch (k) {
    case BeliefKind::Identity: return "identity";
    case BeliefKind::Blind: return "blind";
    case BeliefKind::PiecewiseLinear: return "piecewise_linear";
    case BeliefKind::StochasticLinear: return "stochastic_linear";
  }
  return "?";
}

BiasedBelief BiasedBelief::identity() { return {}; }

BiasedBelief BiasedBelief::blind(Strategy target) {
  BiasedBelief b;
  b.kind = BeliefKind::Blind;
  b.target = std::move(target);
  return b;
}

BiasedBelief BiasedBelief::piecewise(std::vector<std::pair<double, double>> points) {
  BiasedBelief b;
  b.kind = BeliefKind::PiecewiseLinear;
  b.points = std::move(points);
  return b;
}

BiasedBelief BiasedBelief::stochastic(Eigen::MatrixXd m) {
  BiasedBelief b;
  b.kind = BeliefKind::StochasticLinear;
  b.matrix = std::move(m);
  return b;
}

double BiasedBelief::operator()(double s) const {
  switch (kind) {
    case BeliefKind::Identity: return s;
    case BeliefKind::Blind: return target.x;
    case BeliefKind::PiecewiseLinear: {
      if (s <= points.front().first) return points.front().second;
      if (s >= points.back().first) return points.back().second;
      auto it = std::upper_bound(points.begin(), points.end(), s,
                                 [](double v, const std::pair<double, double>& p) { return v < p.first; });
      const auto& [x1, y1] = *it;
      const auto& [x0, y0] = *(it - 1);
      if (y0 == y1) return y0;
      return y0 + (y1 - y0) * (s - x0) / (x1 - x0);
    }
    case BeliefKind::StochasticLinear: break;
  }
  throw ValidationError("stochastic_linear belief applied to a scalar strategy");
}

void validateBelief(const Game& g, int holder, const BiasedBelief& b) {
  const int j = other(holder);
  const std::string who = "belief of player " + std::to_string(holder + 1);
  if (isInterval(g)) {
    const auto& ig = asInterval(g);
    const double lo = ig.lo[j], hi = ig.hi[j], eps = 1e-9 * ig.width(j);
    switch (b.kind) {
      case BeliefKind::Identity: return;
      case BeliefKind::Blind: validateStrategy(g, j, b.target); return;
      case BeliefKind::StochasticLinear: throw ValidationError(who + ": stochastic_linear needs a finite game");
      case BeliefKind::PiecewiseLinear: break;
    }
    const auto& p = b.points;
    if (p.size() < 2) throw ValidationError(who + ": piecewise_linear needs at least two breakpoints");
    for (size_t k = 1; k < p.size(); ++k)
      if (!(p[k].first > p[k - 1].first))
        throw ValidationError(who + ": breakpoint inputs must strictly increase");
    if (std::abs(p.front().first - lo) > eps || std::abs(p.back().first - hi) > eps)
      throw ValidationError(who + ": breakpoints must span [" + formatNumber(lo) + ", " + formatNumber(hi) + "]");
    for (const auto& [x, y] : p)
      if (!std::isfinite(y) || y < lo - eps || y > hi + eps)
        throw ValidationError(who + ": output " + formatNumber(y) + " outside the opponent interval");
    return;
  }
  const auto& fg = asFinite(g);
  const int n = fg.n(j);
  switch (b.kind) {
    case BeliefKind::Identity: return;
    case BeliefKind::Blind: validateStrategy(g, j, b.target); return;
    case BeliefKind::PiecewiseLinear: throw ValidationError(who + ": piecewise_linear needs an interval game");
    case BeliefKind::StochasticLinear: break;
  }
  const auto& m = b.matrix;
  if (m.rows() != n || m.cols() != n)
    throw ValidationError(who + ": matrix must be " + std::to_string(n) + "x" + std::to_string(n));
  if (m.minCoeff() < -kSimplexTol) throw ValidationError(who + ": matrix has negative entries");
  for (int c = 0; c < n; ++c)
    if (std::abs(m.col(c).sum() - 1.0) > kSimplexTol)
      throw ValidationError(who + ": column " + std::to_string(c + 1) + " does not sum to 1");
}

Strategy evaluateBelief(const BiasedBelief& b, const Strategy& s) {
  switch (b.kind) {
    case BeliefKind::Identity: return s;
    case BeliefKind::Blind: return b.target;
    case BeliefKind::PiecewiseLinear: return Strategy(b(s.x));
    case BeliefKind::StochasticLinear: {
      Eigen::VectorXd w = b.matrix * s.w;
      double sum = w.sum();
      if (std::abs(sum - 1.0) > 1e-12) w /= sum;
      return Strategy(w);
    }
  }
  return s;
}

Strategy evaluateBelief(const Game& g, int holder, const BiasedBelief& b, const Strategy& s) {
  validateStrategy(g, other(holder), s);
  if (isInterval(g) && b.kind == BeliefKind::StochasticLinear)
    throw ValidationError("stochastic_linear belief applied to a scalar strategy");
  if (!isInterval(g) && b.kind == BeliefKind::PiecewiseLinear)
    throw ValidationError("piecewise_linear belief applied to a mixed strategy");
  return evaluateBelief(b, s);
}

Eigen::MatrixXd beliefMatrix(const BiasedBelief& b, int n) {
  switch (b.kind) {
    case BeliefKind::Identity: return Eigen::MatrixXd::Identity(n, n);
    case BeliefKind::Blind: return b.target.w * Eigen::RowVectorXd::Ones(n);
    case BeliefKind::StochasticLinear: return b.matrix;
    case BeliefKind::PiecewiseLinear: break;
  }
  throw ValidationError("piecewise_linear belief has no matrix form");
}

bool isMonotone(const BiasedBelief& b, const Game& g, int holder) {
  if (b.kind == BeliefKind::Identity || b.kind == BeliefKind::Blind) return true;
  if (b.kind == BeliefKind::PiecewiseLinear) {
    for (size_t k = 1; k < b.points.size(); ++k)
      if (b.points[k].second < b.points[k - 1].second) return false;
    return true;
  }
  // Moving weight alpha toward action a changes perceived probability of
  // action r != a by alpha * (M[r][a] - (M s)[r]). This is never positive for
  // all s exactly when M[r][a] equals the row minimum.
  const auto& m = b.matrix;
  const int n = asFinite(g).n(other(holder));
  for (int r = 0; r < n; ++r) {
    const double rowMin = m.row(r).minCoeff();
    for (int a = 0; a < n; ++a)
      if (a != r && m(r, a) > rowMin + kSimplexTol) return false;
  }
  return true;
}

std::string describe(const BiasedBelief& b) {
  std::ostringstream os;
  os << toString(b.kind);
  switch (b.kind) {
    case BeliefKind::Identity: break;
    case BeliefKind::Blind: os << ' ' << describe(b.target); break;
    case BeliefKind::PiecewiseLinear:
      os << ' ';
      for (size_t k = 0; k < b.points.size(); ++k)
        os << (k ? " " : "") << '(' << formatNumber(b.points[k].first) << ',' << formatNumber(b.points[k].second)
           << ')';
      break;
    case BeliefKind::StochasticLinear:
      os << " [";
      for (int r = 0; r < b.matrix.rows(); ++r) {
        os << (r ? "; " : "");
        for (int c = 0; c < b.matrix.cols(); ++c) os << (c ? " " : "") << formatNumber(b.matrix(r, c));
      }
      os << ']';
      break;
  }
  return os.str();
}

bool operator==(const BiasedBelief& a, const BiasedBelief& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case BeliefKind::Identity: return true;
    case BeliefKind::Blind:
      return a.target.mixed() ? (a.target.mixed() == b.target.mixed() && a.target.w == b.target.w)
                              : (!b.target.mixed() && a.target.x == b.target.x);
    case BeliefKind::PiecewiseLinear: return a.points == b.points;
    case BeliefKind::StochasticLinear: return a.matrix == b.matrix;
  }
  return false;
}

double perceivedPayoff(const BiasedGame& bg, int i, const Strategy& s_i, const Strategy& s_j) {
  const Strategy perceived = evaluateBelief(*bg.base, i, bg.beliefs[i], s_j);
  return payoff(*bg.base, i, s_i, perceived);
}

double perceivedRegret(const Game& g, const Configuration& c, int i) {
  const int j = other(i);
  const Strategy seen = evaluateBelief(c.beliefs[i], c.strategies[j]);
  if (isInterval(g)) {
    const auto& ig = asInterval(g);
    auto f = [&](double x) { return ig.u(i, x, seen.x); };
    return argmaxConcave(f, ig.lo[i], ig.hi[i]).value - f(c.strategies[i].x);
  }
  const Eigen::VectorXd vals = asFinite(g).own(i) * seen.w;
  return vals.maxCoeff() - c.strategies[i].w.dot(vals);
}

void checkConfiguration(const Game& g, const Configuration& c) {
  for (int i = 0; i < 2; ++i) {
    validateStrategy(g, i, c.strategies[i]);
    validateBelief(g, i, c.beliefs[i]);
  }
  for (int i = 0; i < 2; ++i) {
    double r = perceivedRegret(g, c, i);
    if (r > kReplyTol)
      throw ValidationError("player " + std::to_string(i + 1) + " is not best-replying to its perceived opponent " +
                            "(perceived gain " + formatNumber(r) + ")");
  }
}

}  // namespace bbe
