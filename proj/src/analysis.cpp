#include "bbe/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "bbe/lp.hpp"

namespace bbe {

namespace {

double payTol(double v) { return kReplyTol * std::max(1.0, std::abs(v)); }

double thresholded(double v, double t) { return std::abs(v) <= t ? 0.0 : v; }

// Evenly spaced points of an interval; a sliver counts as one point.
void samplePoints(const Interval& iv, int count, double width, std::vector<double>& out) {
  if (iv.hi - iv.lo < 1e-5 * width || count < 2) {
    out.push_back(iv.mid());
    return;
  }
  for (int k = 0; k < count; ++k) out.push_back(k == count - 1 ? iv.hi : iv.lo + (iv.hi - iv.lo) * k / (count - 1));
}

std::vector<double> lattice(double lo, double hi, int n) {
  std::vector<double> xs(n + 1);
  for (int k = 0; k <= n; ++k) xs[k] = k == n ? hi : lo + (hi - lo) * k / n;
  return xs;
}

// Minimises f over [lo, hi] from a lattice scan plus a golden polish of the
// best bracket; lattice endpoints win ties so corner minima stay exact.
std::pair<double, double> minimiseScan(const Fn1& f, const std::vector<double>& xs) {
  std::vector<double> vs(xs.size());
  for (size_t k = 0; k < xs.size(); ++k) vs[k] = f(xs[k]);
  size_t best = static_cast<size_t>(std::min_element(vs.begin(), vs.end()) - vs.begin());
  double arg = xs[best], val = vs[best];
  if (xs.size() > 1) {
    double a = xs[best == 0 ? 0 : best - 1], b = xs[std::min(best + 1, xs.size() - 1)];
    double g = goldenMax([&](double t) { return -f(t); }, a, b, 1e-10 * (xs.back() - xs.front()));
    double fg = f(g);
    if (fg < val) {
      arg = g;
      val = fg;
    }
  }
  return {arg, val};
}

std::pair<double, double> maximiseScan(const Fn1& f, const std::vector<double>& xs) {
  auto r = minimiseScan([&](double t) { return -f(t); }, xs);
  return {r.first, -r.second};
}

// Max of a continuous function over an interval via samples and a polish.
double maxOver(const Fn1& f, const Interval& iv, int samples) {
  if (iv.hi - iv.lo <= 0) return f(iv.lo);
  return maximiseScan(f, lattice(iv.lo, iv.hi, samples)).second;
}

const double kLpEps = 1e-9;
constexpr int kPairSupportLimit = 12;

}  // namespace

ArgmaxResult bestReplyInterval(const IntervalGame& g, int i, double s_j) {
  return argmaxConcave([&](double x) { return g.u(i, x, s_j); }, g.lo[i], g.hi[i]);
}

std::vector<int> pureBestReplies(const Eigen::MatrixXd& own, const Eigen::VectorXd& y, double* value) {
  const Eigen::VectorXd vals = own * y;
  const double m = vals.maxCoeff();
  const double tol = 1e-9 * std::max(1.0, std::abs(m));
  std::vector<int> out;
  for (int a = 0; a < vals.size(); ++a)
    if (vals[a] >= m - tol) out.push_back(a);
  if (value) *value = m;
  return out;
}

BestReplySet bestReply(const Game& g, int i, const Strategy& s_j) {
  validateStrategy(g, other(i), s_j);
  BestReplySet out;
  if (isInterval(g)) {
    auto r = bestReplyInterval(asInterval(g), i, s_j.x);
    out.range = r.arg;
    out.value = r.value;
  } else {
    out.actions = pureBestReplies(asFinite(g).own(i), s_j.w, &out.value);
  }
  return out;
}

std::vector<std::vector<int>> candidateSupports(int n, bool* exhaustive) {
  std::vector<std::vector<int>> out;
  if (n <= 3) {
    for (int mask = 1; mask < (1 << n); ++mask) {
      std::vector<int> s;
      for (int a = 0; a < n; ++a)
        if (mask & (1 << a)) s.push_back(a);
      out.push_back(s);
    }
    if (exhaustive) *exhaustive = true;
    return out;
  }
  for (int a = 0; a < n; ++a) out.push_back({a});
  // Pairs cost one LP each over n variables; past a dozen actions only
  // singletons are listed.
  if (n <= kPairSupportLimit)
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) out.push_back({a, b});
  if (exhaustive) *exhaustive = false;
  return out;
}

std::vector<int> supportOf(const Eigen::VectorXd& w, double tol) {
  std::vector<int> s;
  for (int a = 0; a < w.size(); ++a)
    if (w[a] > tol) s.push_back(a);
  return s;
}

namespace {

// max delta s.t. y in simplex, actions in T tie, and beat the rest by delta.
// Returns the LP solution (y, delta) or nothing if T cannot all be best
// replies at once.
std::optional<std::pair<Eigen::VectorXd, double>> supportLP(const Eigen::MatrixXd& own,
                                                            const std::vector<int>& T) {
  const int n = static_cast<int>(own.rows()), m = static_cast<int>(own.cols());
  std::vector<bool> in(n, false);
  for (int a : T) in[a] = true;
  const int nOut = n - static_cast<int>(T.size());
  const int vars = m + 1;
  Eigen::MatrixXd Aub = Eigen::MatrixXd::Zero(nOut + 1, vars);
  Eigen::VectorXd bub = Eigen::VectorXd::Zero(nOut + 1);
  int r = 0;
  for (int b = 0; b < n; ++b) {
    if (in[b]) continue;
    Aub.row(r).head(m) = own.row(b) - own.row(T[0]);
    Aub(r, m) = 1.0;
    ++r;
  }
  Aub(r, m) = 1.0;
  bub[r] = 1.0;
  Eigen::MatrixXd Aeq = Eigen::MatrixXd::Zero(static_cast<int>(T.size()), vars);
  Eigen::VectorXd beq = Eigen::VectorXd::Zero(static_cast<int>(T.size()));
  for (size_t k = 1; k < T.size(); ++k) Aeq.row(static_cast<int>(k)).head(m) = own.row(T[k]) - own.row(T[0]);
  Aeq.row(0).head(m).setOnes();
  beq[0] = 1.0;
  Eigen::VectorXd c = Eigen::VectorXd::Zero(vars);
  c[m] = 1.0;
  auto res = solveLP(c, Aub, bub, Aeq, beq);
  if (!res.optimal()) return std::nullopt;
  Eigen::VectorXd y = res.x.head(m).cwiseMax(0.0);
  y /= y.sum();
  return std::make_pair(y, res.x[m]);
}

}  // namespace

std::optional<Eigen::VectorXd> supportWitness(const Eigen::MatrixXd& own, const std::vector<int>& support) {
  auto r = supportLP(own, support);
  if (!r) return std::nullopt;
  // Guard against LP round-off: the witness must really make T best replies.
  double v;
  auto br = pureBestReplies(own, r->first, &v);
  for (int a : support)
    if (std::find(br.begin(), br.end(), a) == br.end()) return std::nullopt;
  return r->first;
}

std::optional<Eigen::VectorXd> exactBestReplyWitness(const Eigen::MatrixXd& own, const std::vector<int>& support) {
  auto r = supportLP(own, support);
  if (!r || r->second <= kLpEps) {
    // A full support has no competitors; the margin is vacuous.
    if (r && static_cast<int>(support.size()) == own.rows()) return r->first;
    return std::nullopt;
  }
  return r->first;
}

InverseBestReply inverseBestReply(const Game& g, int i, const Strategy& s_i, int grid) {
  validateStrategy(g, i, s_i);
  InverseBestReply out;
  const int j = other(i);
  if (!isInterval(g)) {
    const auto& fg = asFinite(g);
    if (auto w = supportWitness(fg.own(i), supportOf(s_i.w))) out.witness = Strategy(*w);
    return out;
  }
  const auto& ig = asInterval(g);
  const double x0 = s_i.x, tol = 1e-8 * ig.width(i);
  auto d = [&](double s) { return thresholded(signedDistance(x0, bestReplyInterval(ig, i, s).arg), tol); };
  for (const auto& iv : zeroSet(d, ig.lo[j], ig.hi[j], grid)) {
    Interval kept = iv;
    if (iv.hi - iv.lo < 1e-6 * ig.width(j)) kept = {iv.mid(), iv.mid()};
    // A bracketed jump in the reply is not a solution.
    auto r = bestReplyInterval(ig, i, kept.mid());
    if (r.value - ig.u(i, x0, kept.mid()) > payTol(r.value)) continue;
    out.intervals.push_back(kept);
  }
  return out;
}

bool UndominatedSet::contains(const Strategy& s, double tol) const {
  if (!s.mixed()) {
    for (const auto& iv : intervals)
      if (iv.contains(s.x, tol)) return true;
    return false;
  }
  auto supp = supportOf(s.w, tol);
  for (const auto& T : supports)
    if (std::includes(T.begin(), T.end(), supp.begin(), supp.end())) return true;
  return false;
}

UndominatedSet undominatedSet(const Game& g, int i, int grid) {
  UndominatedSet out;
  const int j = other(i);
  if (!isInterval(g)) {
    const auto& fg = asFinite(g);
    const Eigen::MatrixXd own = fg.own(i);
    for (auto& T : candidateSupports(fg.n(i), &out.exhaustive))
      if (supportWitness(own, T)) out.supports.push_back(T);
    return out;
  }
  const auto& ig = asInterval(g);
  const auto ys = lattice(ig.lo[j], ig.hi[j], grid);
  auto brLo = [&](double s) { return bestReplyInterval(ig, i, s).arg.lo; };
  auto brHi = [&](double s) { return bestReplyInterval(ig, i, s).arg.hi; };
  if (ig.quasiConcave) {
    // Single-peaked payoffs give a convex-valued, closed-graph reply, so the image
    // of the opponent interval is an interval.
    double lo = minimiseScan(brLo, ys).second;
    double hi = maximiseScan(brHi, ys).second;
    out.intervals.push_back({lo, hi});
    return out;
  }
  std::vector<Interval> pieces;
  std::vector<ArgmaxResult> brs(ys.size());
  for (size_t k = 0; k < ys.size(); ++k) {
    brs[k] = bestReplyInterval(ig, i, ys[k]);
    pieces.push_back(brs[k].arg);
  }
  for (size_t k = 0; k + 1 < ys.size(); ++k) {
    Interval a = brs[k].arg, b = brs[k + 1].arg;
    if (a.hi >= b.lo && b.hi >= a.lo) continue;
    double l = ys[k], r = ys[k + 1];
    for (int it = 0; it < 40; ++it) {
      double m = 0.5 * (l + r);
      Interval c = bestReplyInterval(ig, i, m).arg;
      double gapL = std::max(a.lo - c.hi, c.lo - a.hi), gapR = std::max(b.lo - c.hi, c.lo - b.hi);
      if (gapL > gapR) {
        r = m;
        b = c;
      } else {
        l = m;
        a = c;
      }
    }
    // The reply moves continuously across the cell unless a gap survives.
    if (std::max(a.lo - b.hi, b.lo - a.hi) < 1e-6 * ig.width(i))
      pieces.push_back({std::min(a.lo, b.lo), std::max(a.hi, b.hi)});
  }
  out.intervals = mergeIntervals(pieces, 1e-9 * ig.width(i));
  return out;
}

MinmaxResult undominatedMinmax(const Game& g, int i, int grid) {
  const int j = other(i);
  MinmaxResult out;
  const UndominatedSet U = undominatedSet(g, j, grid);
  if (!isInterval(g)) {
    const auto& fg = asFinite(g);
    Eigen::MatrixXd A = fg.own(i);
    const double shift = 1.0 - A.minCoeff();
    A.array() += shift;
    out.value = std::numeric_limits<double>::infinity();
    for (const auto& T : U.supports) {
      const int t = static_cast<int>(T.size()), n = fg.n(i);
      // variables (y_T, v); min v  s.t.  A[:,T] y <= v, sum y = 1
      Eigen::MatrixXd Aub(n, t + 1);
      for (int k = 0; k < t; ++k) Aub.col(k) = A.col(T[k]);
      Aub.col(t).setConstant(-1.0);
      Eigen::MatrixXd Aeq = Eigen::MatrixXd::Zero(1, t + 1);
      Aeq.row(0).head(t).setOnes();
      Eigen::VectorXd c = Eigen::VectorXd::Zero(t + 1);
      c[t] = -1.0;
      auto res = solveLP(c, Aub, Eigen::VectorXd::Zero(n), Aeq, Eigen::VectorXd::Ones(1));
      if (!res.optimal()) continue;
      Eigen::VectorXd y = Eigen::VectorXd::Zero(fg.n(j));
      for (int k = 0; k < t; ++k) y[T[k]] = std::max(0.0, res.x[k]);
      y /= y.sum();
      // Report the exact max over own actions at the LP optimum.
      double v = (fg.own(i) * y).maxCoeff();
      if (v < out.value) {
        out.value = v;
        out.opponent = Strategy(y);
      }
    }
    return out;
  }
  const auto& ig = asInterval(g);
  auto v = [&](double s) { return bestReplyInterval(ig, i, s).value; };
  double total = 0.0;
  for (const auto& iv : U.intervals) total += iv.hi - iv.lo;
  out.value = std::numeric_limits<double>::infinity();
  for (const auto& iv : U.intervals) {
    int n = total > 0 ? std::max(2, static_cast<int>(std::lround(grid * (iv.hi - iv.lo) / total))) : 1;
    auto r = iv.hi > iv.lo ? minimiseScan(v, lattice(iv.lo, iv.hi, n)) : std::make_pair(iv.lo, v(iv.lo));
    if (r.second < out.value) {
      out.value = r.second;
      out.opponent = Strategy(r.first);
    }
  }
  return out;
}

MinmaxResult biasedBeliefMinmax(const Game& g, int i, int grid) {
  const int j = other(i);
  MinmaxResult out;
  if (!isInterval(g)) {
    const auto& fg = asFinite(g);
    const Eigen::MatrixXd Ai = fg.own(i), Aj = fg.own(j);
    const int nj = fg.n(j), ni = fg.n(i);
    // value[k]: player i's best payoff when j plays k. The answer is the
    // least theta for which some perceived strategy confines j's replies to
    // actions of value at most theta.
    Eigen::VectorXd value(nj);
    for (int k = 0; k < nj; ++k) value[k] = Ai.col(k).maxCoeff();
    auto worstReply = [&](const Eigen::VectorXd& y) {
      double w = -std::numeric_limits<double>::infinity();
      for (int k : pureBestReplies(Aj, y)) w = std::max(w, value[k]);
      return w;
    };
    out.value = std::numeric_limits<double>::infinity();
    for (int x = 0; x < ni; ++x) {
      const Eigen::VectorXd y = Eigen::VectorXd::Unit(ni, x);
      const double w = worstReply(y);
      if (w < out.value) {
        out.value = w;
        out.opponent = Strategy(y);
      }
    }
    // Mixed perceived strategies: some allowed action must beat everything
    // outside the allowed set by a positive margin.
    auto confine = [&](double theta) -> std::optional<Eigen::VectorXd> {
      std::vector<int> inside, outside;
      for (int k = 0; k < nj; ++k) (value[k] <= theta ? inside : outside).push_back(k);
      const int nOut = static_cast<int>(outside.size());
      for (int a : inside) {
        Eigen::MatrixXd Aub = Eigen::MatrixXd::Zero(nOut + 1, ni + 1);
        Eigen::VectorXd bub = Eigen::VectorXd::Zero(nOut + 1);
        for (int r = 0; r < nOut; ++r) {
          Aub.row(r).head(ni) = Aj.row(outside[r]) - Aj.row(a);
          Aub(r, ni) = 1.0;
        }
        Aub(nOut, ni) = 1.0;
        bub[nOut] = 1.0;
        Eigen::MatrixXd Aeq = Eigen::MatrixXd::Zero(1, ni + 1);
        Aeq.row(0).head(ni).setOnes();
        Eigen::VectorXd c = Eigen::VectorXd::Zero(ni + 1);
        c[ni] = 1.0;
        const auto res = solveLP(c, Aub, bub, Aeq, Eigen::VectorXd::Ones(1));
        if (!res.optimal() || res.value <= kLpEps) continue;
        Eigen::VectorXd y = res.x.head(ni).cwiseMax(0.0);
        y /= y.sum();
        if (worstReply(y) <= theta) return y;
      }
      return std::nullopt;
    };
    std::vector<double> levels;
    for (int k = 0; k < nj; ++k)
      if (value[k] < out.value) levels.push_back(value[k]);
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    // Feasibility is monotone in theta, so bisect over the candidate levels.
    int lo = 0, hi = static_cast<int>(levels.size());
    while (lo < hi) {
      const int mid = (lo + hi) / 2;
      if (auto y = confine(levels[mid])) {
        out.value = levels[mid];
        out.opponent = Strategy(*y);
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    return out;
  }
  const auto& ig = asInterval(g);
  auto v = [&](double s) { return bestReplyInterval(ig, i, s).value; };
  auto W = [&](double perceived) { return maxOver(v, bestReplyInterval(ig, j, perceived).arg, 16); };
  auto r = minimiseScan(W, lattice(ig.lo[i], ig.hi[i], grid));
  out.value = r.second;
  out.opponent = Strategy(r.first);
  return out;
}

StackelbergResult stackelberg(const Game& g, int i, int grid) {
  const int j = other(i);
  StackelbergResult out;
  const UndominatedSet U = undominatedSet(g, i, grid);
  if (!isInterval(g)) {
    const auto& fg = asFinite(g);
    const Eigen::MatrixXd Ai = fg.own(i), Bj = fg.own(j);
    const int ni = fg.n(i), nj = fg.n(j);
    out.payoff = -std::numeric_limits<double>::infinity();
    if (ni <= 3 && nj <= 3) {
      // Commitment LP per (leader support, induced follower action); the
      // follower breaks ties in the leader's favour.
      for (const auto& T : U.supports)
        for (int k = 0; k < nj; ++k) {
          const int t = static_cast<int>(T.size());
          Eigen::MatrixXd Aub(nj, t);
          for (int l = 0; l < nj; ++l)
            for (int q = 0; q < t; ++q) Aub(l, q) = Bj(l, T[q]) - Bj(k, T[q]);
          Eigen::VectorXd c(t);
          for (int q = 0; q < t; ++q) c[q] = Ai(T[q], k);
          auto res = solveLP(c, Aub, Eigen::VectorXd::Zero(nj), Eigen::MatrixXd::Ones(1, t), Eigen::VectorXd::Ones(1));
          if (!res.optimal() || res.value <= out.payoff + 1e-12) continue;
          Eigen::VectorXd x = Eigen::VectorXd::Zero(ni);
          for (int q = 0; q < t; ++q) x[T[q]] = std::max(0.0, res.x[q]);
          x /= x.sum();
          out.leader = Strategy(x);
          out.follower = Strategy::pure(nj, k);
          out.payoff = res.value;
        }
      return out;
    }
    out.caveat = "pure leader commitments only (more than 3 actions)";
    for (const auto& T : U.supports) {
      if (T.size() != 1) continue;
      Eigen::VectorXd x = Eigen::VectorXd::Unit(ni, T[0]);
      for (int k : pureBestReplies(Bj, x))
        if (Ai(T[0], k) > out.payoff) {
          out.payoff = Ai(T[0], k);
          out.leader = Strategy(x);
          out.follower = Strategy::pure(nj, k);
        }
    }
    return out;
  }
  const auto& ig = asInterval(g);
  // Best outcome for the leader among the follower's replies.
  auto follow = [&](double s, double* reply) {
    Interval B = bestReplyInterval(ig, j, s).arg;
    auto f = [&](double r) { return ig.u(i, s, r); };
    if (B.hi <= B.lo) {
      if (reply) *reply = B.lo;
      return f(B.lo);
    }
    auto r = maximiseScan(f, lattice(B.lo, B.hi, 16));
    if (reply) *reply = r.first;
    return r.second;
  };
  out.payoff = -std::numeric_limits<double>::infinity();
  double total = 0.0;
  for (const auto& iv : U.intervals) total += iv.hi - iv.lo;
  for (const auto& iv : U.intervals) {
    int n = total > 0 ? std::max(2, static_cast<int>(std::lround(grid * (iv.hi - iv.lo) / total))) : 1;
    auto r = iv.hi > iv.lo ? maximiseScan([&](double s) { return follow(s, nullptr); }, lattice(iv.lo, iv.hi, n))
                           : std::make_pair(iv.lo, follow(iv.lo, nullptr));
    if (r.second > out.payoff) {
      double reply = 0.0;
      out.payoff = follow(r.first, &reply);
      out.leader = Strategy(r.first);
      out.follower = Strategy(reply);
    }
  }
  return out;
}

PerceivedGame perceivedGame(const BiasedGame& bg) {
  PerceivedGame pg;
  pg.base = bg.base;
  for (int i = 0; i < 2; ++i) validateBelief(*bg.base, i, bg.beliefs[i]);
  if (isInterval(*bg.base)) {
    const IntervalGame* ig = &asInterval(*bg.base);
    for (int i = 0; i < 2; ++i) {
      BiasedBelief b = bg.beliefs[i];
      pg.independent[i] = b.isBlind();
      if (b.kind == BeliefKind::Identity)
        pg.f[i] = [ig, i](double own, double opp) { return ig->u(i, own, opp); };
      else
        pg.f[i] = [ig, i, b](double own, double opp) { return ig->u(i, own, b(opp)); };
    }
    return pg;
  }
  const auto& fg = asFinite(*bg.base);
  for (int i = 0; i < 2; ++i) {
    pg.P[i] = fg.own(i) * beliefMatrix(bg.beliefs[i], fg.n(other(i)));
    pg.independent[i] = bg.beliefs[i].isBlind();
  }
  return pg;
}

PerceivedGame perceivedGame(const Game& g) {
  BiasedGame bg{&g, {BiasedBelief::identity(), BiasedBelief::identity()}};
  return perceivedGame(bg);
}

double perceivedGap(const PerceivedGame& pg, int i, const Profile& s) {
  const int j = other(i);
  if (isInterval(*pg.base)) {
    const auto& ig = asInterval(*pg.base);
    const auto& f = pg.f[i];
    const double opp = s[j].x;
    auto r = argmaxConcave([&](double x) { return f(x, opp); }, ig.lo[i], ig.hi[i]);
    return r.value - f(s[i].x, opp);
  }
  const Eigen::VectorXd vals = pg.P[i] * s[j].w;
  return vals.maxCoeff() - s[i].w.dot(vals);
}

bool isPerceivedEquilibrium(const PerceivedGame& pg, const Profile& s) {
  for (int i = 0; i < 2; ++i) {
    double gap = perceivedGap(pg, i, s);
    double scale = isInterval(*pg.base) ? pg.f[i](s[i].x, s[other(i)].x)
                                        : s[i].w.dot(pg.P[i] * s[other(i)].w);
    if (gap > payTol(scale)) return false;
  }
  return true;
}

namespace {

bool sameProfile(const Profile& a, const Profile& b, double tol) {
  return distance(a[0], b[0]) <= tol && distance(a[1], b[1]) <= tol;
}

void pushUnique(std::vector<Profile>& v, const Profile& p, double tol) {
  for (const auto& q : v)
    if (sameProfile(q, p, tol)) return;
  v.push_back(p);
}

EquilibriumSet solveInterval(const PerceivedGame& pg, int grid) {
  const auto& g = asInterval(*pg.base);
  const double w1 = g.width(0), w2 = g.width(1);
  // The residual scans revisit the same lattice abscissae many times when a
  // reply is a whole interval, so replies are cached by exact argument.
  std::array<std::unordered_map<double, ArgmaxResult>, 2> memo;
  auto R = [&](int i, double opp) -> ArgmaxResult {
    auto& m = memo[i];
    const double key = pg.independent[i] ? 0.0 : opp;
    if (auto it = m.find(key); it != m.end()) return it->second;
    if (m.size() > 200000) m.clear();
    const auto& f = pg.f[i];
    return m[key] = argmaxConcave([&](double x) { return f(x, opp); }, g.lo[i], g.hi[i]);
  };
  // Replies are accurate to about sqrt(machine epsilon) of the width, so the
  // fixed-point residual is only meaningful above that.
  const double tol2 = 1e-7 * w2;

  // Residual of the fixed-point condition at y; collects matching x values.
  auto solveAt = [&](double y, std::vector<double>* xs) -> double {
    const Interval X = R(0, y).arg;
    if (X.hi <= X.lo) {
      const double x = X.lo;
      const double r = thresholded(signedDistance(y, R(1, x).arg), tol2);
      if (r == 0.0 && xs) xs->push_back(x);
      return r;
    }
    auto q = [&](double x) { return thresholded(signedDistance(y, R(1, x).arg), tol2); };
    auto zs = zeroSet(q, X.lo, X.hi, 64);
    if (zs.empty()) return q(X.lo);
    if (xs)
      for (const auto& z : zs) samplePoints(z, 17, w1, *xs);
    return 0.0;
  };

  EquilibriumSet out;
  std::vector<Profile> cand;
  const auto ys = zeroSet([&](double y) { return solveAt(y, nullptr); }, g.lo[1], g.hi[1], grid);
  for (const auto& iv : ys) {
    std::vector<double> yPts;
    samplePoints(iv, 65, w2, yPts);
    for (double y : yPts) {
      std::vector<double> xs;
      solveAt(y, &xs);
      if (xs.empty()) xs.push_back(R(0, y).arg.mid());
      for (double x : xs) cand.push_back({Strategy(x), Strategy(y)});
    }
  }
  const double dedup = 1e-9 * std::max(w1, w2);
  for (const auto& p : cand) {
    const double x = p[0].x, y = p[1].x;
    auto r1 = R(0, y);
    if (r1.value - pg.f[0](x, y) > payTol(r1.value)) continue;
    auto r2 = R(1, x);
    if (r2.value - pg.f[1](y, x) > payTol(r2.value)) continue;
    pushUnique(out.profiles, p, dedup);
  }
  if (!g.quasiConcave) {
    out.complete = false;
    out.caveat = "payoffs are not quasi-concave in own strategy; the equilibrium scan may be incomplete";
  }
  if (out.profiles.empty()) out.caveat += (out.caveat.empty() ? "" : "; ") + std::string("no equilibrium found");
  return out;
}

struct Vertex {
  Eigen::VectorXd z;
  unsigned labels = 0;
};

// Vertices of {z >= 0, C z <= 1} with labels: z_k = 0 gives zeroLabel[k],
// row r tight gives rowLabel[r].
std::vector<Vertex> polytopeVertices(const Eigen::MatrixXd& C, const std::vector<int>& zeroLabel,
                                     const std::vector<int>& rowLabel) {
  const int d = static_cast<int>(C.cols()), m = static_cast<int>(C.rows());
  const int total = d + m;
  std::vector<Vertex> out;
  std::vector<int> pick(d);
  // Enumerate d-subsets of the constraints in lexicographic order.
  std::vector<bool> sel(total, false);
  std::fill(sel.begin(), sel.begin() + d, true);
  std::sort(sel.begin(), sel.end(), std::greater<bool>());
  do {
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(d, d);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(d);
    int r = 0;
    for (int k = 0; k < total; ++k) {
      if (!sel[k]) continue;
      if (k < d) {
        M(r, k) = 1.0;
      } else {
        M.row(r) = C.row(k - d);
        rhs[r] = 1.0;
      }
      ++r;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
    if (!lu.isInvertible()) continue;
    Eigen::VectorXd z = lu.solve(rhs);
    if (z.minCoeff() < -1e-9 || z.sum() <= 1e-12) continue;
    Eigen::VectorXd cz = C * z;
    if (cz.maxCoeff() > 1.0 + 1e-9) continue;
    z = z.cwiseMax(0.0);
    Vertex v;
    v.z = z;
    for (int k = 0; k < d; ++k)
      if (z[k] <= 1e-9) v.labels |= 1u << zeroLabel[k];
    for (int q = 0; q < m; ++q)
      if (cz[q] >= 1.0 - 1e-9) v.labels |= 1u << rowLabel[q];
    bool dup = false;
    for (const auto& u : out)
      if ((u.z - v.z).lpNorm<Eigen::Infinity>() < 1e-9) dup = true;
    if (!dup) out.push_back(v);
  } while (std::prev_permutation(sel.begin(), sel.end()));
  return out;
}

EquilibriumSet solveFinite(const PerceivedGame& pg) {
  const auto& fg = asFinite(*pg.base);
  const int n1 = fg.n(0), n2 = fg.n(1);
  EquilibriumSet out;
  const Eigen::MatrixXd& A = pg.P[0];                   // n1 x n2
  const Eigen::MatrixXd B = pg.P[1].transpose();         // n1 x n2
  if (n1 > 3 || n2 > 3) {
    out.caveat = "pure equilibria only (more than 3 actions)";
    out.complete = false;
    std::vector<std::vector<int>> br1(n2), br2(n1);
    for (int b = 0; b < n2; ++b) br1[b] = pureBestReplies(pg.P[0], Eigen::VectorXd::Unit(n2, b));
    for (int a = 0; a < n1; ++a) br2[a] = pureBestReplies(pg.P[1], Eigen::VectorXd::Unit(n1, a));
    for (int b = 0; b < n2; ++b)
      for (int a : br1[b])
        if (std::find(br2[a].begin(), br2[a].end(), b) != br2[a].end())
          out.profiles.push_back({Strategy::pure(n1, a), Strategy::pure(n2, b)});
    if (out.profiles.empty()) out.caveat += "; no pure equilibrium";
    return out;
  }
  const Eigen::MatrixXd As = (A.array() - A.minCoeff() + 1.0).matrix();
  const Eigen::MatrixXd Bs = (B.array() - B.minCoeff() + 1.0).matrix();
  std::vector<int> xZero(n1), xRow(n2), yZero(n2), yRow(n1);
  for (int k = 0; k < n1; ++k) xZero[k] = yRow[k] = k;
  for (int l = 0; l < n2; ++l) xRow[l] = yZero[l] = n1 + l;
  const auto vx = polytopeVertices(Bs.transpose(), xZero, xRow);
  const auto vy = polytopeVertices(As, yZero, yRow);
  const unsigned all = (1u << (n1 + n2)) - 1;
  std::vector<std::pair<int, int>> pairs;
  for (size_t a = 0; a < vx.size(); ++a)
    for (size_t b = 0; b < vy.size(); ++b)
      if ((vx[a].labels | vy[b].labels) == all) pairs.emplace_back(static_cast<int>(a), static_cast<int>(b));
  auto profileOf = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    return Profile{Strategy(Eigen::VectorXd(x / x.sum())), Strategy(Eigen::VectorXd(y / y.sum()))};
  };
  for (auto [a, b] : pairs) pushUnique(out.profiles, profileOf(vx[a].z, vy[b].z), 1e-9);
  // Equilibrium components: two extreme equilibria whose cross pairs are
  // also equilibria span a product set; sample its centre.
  auto isPair = [&](int a, int b) {
    return std::find(pairs.begin(), pairs.end(), std::make_pair(a, b)) != pairs.end();
  };
  int extra = 0;
  for (size_t p = 0; p < pairs.size() && extra < 65; ++p)
    for (size_t q = p + 1; q < pairs.size() && extra < 65; ++q) {
      auto [a1, b1] = pairs[p];
      auto [a2, b2] = pairs[q];
      if (!isPair(a1, b2) || !isPair(a2, b1)) continue;
      Eigen::VectorXd x = 0.5 * (vx[a1].z / vx[a1].z.sum() + vx[a2].z / vx[a2].z.sum());
      Eigen::VectorXd y = 0.5 * (vy[b1].z / vy[b1].z.sum() + vy[b2].z / vy[b2].z.sum());
      size_t before = out.profiles.size();
      pushUnique(out.profiles, profileOf(x, y), 1e-9);
      if (out.profiles.size() > before) ++extra;
    }
  return out;
}

}  // namespace

EquilibriumSet solveEquilibria(const PerceivedGame& pg, int grid) {
  return isInterval(*pg.base) ? solveInterval(pg, grid) : solveFinite(pg);
}

EquilibriumSet nashOfBiasedGame(const BiasedGame& bg, int grid) { return solveEquilibria(perceivedGame(bg), grid); }

EquilibriumSet nashEquilibria(const Game& g, int grid) { return solveEquilibria(perceivedGame(g), grid); }

EquilibriumSet plausibleFilter(const PerceivedGame& pg, const Configuration& origin, int deviator,
                               const EquilibriumSet& eqs) {
  const int i = deviator, j = other(i);
  const BiasedBelief& psiJ = origin.beliefs[j];
  const Strategy seenStar = evaluateBelief(psiJ, origin.strategies[i]);
  double unit = 1.0;
  if (isInterval(*pg.base)) unit = asInterval(*pg.base).width(j);
  const double same = 1e-7 * unit, moved = 1e-7 * unit;

  EquilibriumSet out = eqs;
  out.plausible.assign(eqs.profiles.size(), true);
  for (size_t k = 0; k < eqs.profiles.size(); ++k) {
    const Profile& e = eqs.profiles[k];
    if (distance(evaluateBelief(psiJ, e[i]), seenStar) > same) continue;
    if (distance(e[j], origin.strategies[j]) <= moved) continue;
    Profile alt = e;
    alt[j] = origin.strategies[j];
    if (!isPerceivedEquilibrium(pg, alt)) continue;
    out.plausible[k] = false;
    bool present = false;
    for (const auto& p : out.profiles)
      if (sameProfile(p, alt, 1e-9 * unit)) present = true;
    if (!present) {
      out.profiles.push_back(alt);
      out.plausible.push_back(true);
    }
  }
  return out;
}

std::vector<std::array<double, 2>> bruteForceNash(const IntervalGame& g, int grid, double slack, Exec exec) {
  const auto xs = lattice(g.lo[0], g.hi[0], grid), ys = lattice(g.lo[1], g.hi[1], grid);
  const int n = grid + 1;
  Eigen::MatrixXd U1(n, n), U2(n, n);
  forEachIndex(n, exec, [&](int a) {
    for (int b = 0; b < n; ++b) {
      U1(a, b) = g.u12(0, xs[a], ys[b]);
      U2(a, b) = g.u12(1, xs[a], ys[b]);
    }
  });
  const Eigen::RowVectorXd best1 = U1.colwise().maxCoeff();
  const Eigen::VectorXd best2 = U2.rowwise().maxCoeff();
  std::vector<std::vector<std::array<double, 2>>> rows(n);
  forEachIndex(n, exec, [&](int a) {
    for (int b = 0; b < n; ++b)
      if (U1(a, b) >= best1[b] - slack && U2(a, b) >= best2[a] - slack) rows[a].push_back({xs[a], ys[b]});
  });
  std::vector<std::array<double, 2>> out;
  for (auto& r : rows) out.insert(out.end(), r.begin(), r.end());
  return out;
}

}  // namespace bbe
