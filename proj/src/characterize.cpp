#include "bbe/characterize.hpp"

#include <cmath>

#include "bbe/lp.hpp"

namespace bbe {

const char* toString(Verdict v) {
  switch (v) {
    case Verdict::MemberSufficient: return "member_sufficient";
    case Verdict::MemberNecessaryOnly: return "member_necessary_only";
    case Verdict::NonMember: return "non_member";
    case Verdict::Boundary: return "boundary";
  }
  return "?";
}

const char* toString(Condition c) {
  switch (c) {
    case Condition::Undominated: return "undominated";
    case Condition::Minmax: return "minmax";
    case Condition::InvestmentDirection: return "investment_direction";
  }
  return "?";
}

const char* toString(Attitude a) {
  switch (a) {
    case Attitude::Wishful: return "wishful";
    case Attitude::Pessimistic: return "pessimistic";
    case Attitude::Neutral: return "neutral";
    case Attitude::ExemptExtreme: return "exempt_extreme";
  }
  return "?";
}

double lipschitzBound(const IntervalGame& g, int i, int p) {
  const int n = 64;
  const double h = 1e-4 * g.width(p);
  double best = 0.0;
  for (int a = 0; a <= n; ++a)
    for (int b = 0; b <= n; ++b) {
      const double s[2] = {g.lo[0] + g.width(0) * a / n, g.lo[1] + g.width(1) * b / n};
      // Difference quotient with step k, one-sided at the edges.
      auto quotient = [&](double k) {
        double up[2] = {s[0], s[1]}, dn[2] = {s[0], s[1]};
        up[p] = std::min(g.hi[p], s[p] + k);
        dn[p] = std::max(g.lo[p], s[p] - k);
        return (g.u12(i, up[0], up[1]) - g.u12(i, dn[0], dn[1])) / (up[p] - dn[p]);
      };
      // Richardson step removes the first-order error of one-sided quotients.
      const double d = 2.0 * quotient(0.5 * h) - quotient(h);
      best = std::max(best, std::abs(d));
    }
  return best;
}

double MembershipContext::cellCenter(int p, int k) const {
  return game->lo[p] + game->width(p) * (k + 0.5) / resolution;
}

MembershipContext membershipContext(const Game& g, int resolution, Exec exec) {
  if (resolution < 1) throw ValidationError("resolution must be positive");
  MembershipContext ctx;
  if (isInterval(g)) {
    ctx.game = std::make_shared<IntervalGame>(asInterval(g));
  } else {
    const auto& fg = asFinite(g);
    if (fg.n(0) != 2 || fg.n(1) != 2)
      throw UnsupportedError("membership needs an interval game or a two-action finite game");
    ctx.game = std::make_shared<IntervalGame>(toIntervalForm(fg));
  }
  const IntervalGame& ig = *ctx.game;
  ctx.cls = classify(ig, exec);
  if (ctx.cls.externalities != Externalities::Positive)
    throw UnsupportedError("characterisation needs positive externalities; game has " + ctx.cls.summary());
  if (!ctx.cls.determinate()) throw UnsupportedError("game class is indeterminate: " + ctx.cls.summary());
  const Game view = ig;
  ctx.resolution = resolution;
  for (int i = 0; i < 2; ++i) {
    ctx.undominated[i] = undominatedSet(view, i);
    ctx.MU[i] = undominatedMinmax(view, i).value;
    ctx.Mtilde[i] = biasedBeliefMinmax(view, i).value;
    ctx.lipschitz[i] = std::max(lipschitzBound(ig, i, 0), lipschitzBound(ig, i, 1));
    ctx.step[i] = ig.width(i) / resolution;
  }
  const double step = std::max(ctx.step[0], ctx.step[1]);
  for (int i = 0; i < 2; ++i) {
    ctx.strategyBand[i] = 2.0 * ctx.step[i];
    ctx.payoffBand[i] = 2.0 * step * ctx.lipschitz[i];
  }
  return ctx;
}

MembershipVerdict membershipTest(const MembershipContext& ctx, double s1, double s2,
                                 const std::array<Interval, 2>* br) {
  const IntervalGame& g = *ctx.game;
  const double s[2] = {s1, s2};
  MembershipVerdict v;
  bool outside = false, near = false, sufficient = true;
  auto judge = [&](double margin, double band, double eps, Condition c, int i) {
    if (margin < -eps) v.failed.push_back({c, i});
    if (margin < -band) outside = true;
    else if (margin < -eps) near = true;
  };
  for (int i = 0; i < 2; ++i) {
    const int j = other(i);
    const Interval B = br ? (*br)[i] : bestReplyInterval(g, i, s[j]).arg;
    v.payoff[i] = g.u(i, s[i], s[j]);

    double und = -INFINITY;
    for (const auto& iv : ctx.undominated[i].intervals) {
      double m = iv.contains(s[i]) ? std::min(s[i] - iv.lo, iv.hi - s[i]) : -std::min(std::abs(s[i] - iv.lo), std::abs(s[i] - iv.hi));
      und = std::max(und, m);
    }
    v.undominated[i] = und;
    v.minmax[i] = v.payoff[i] - ctx.MU[i];
    v.sufficient[i] = v.payoff[i] - ctx.Mtilde[i];

    bool over = ctx.cls.differences == Differences::Complements ||
                (ctx.cls.differences == Differences::Opposites && i != ctx.cls.complementPlayer);
    v.investment[i] = over ? s[i] - B.lo : B.hi - s[i];

    const double epsS = 1e-7 * g.width(i);
    const double epsP = 1e-9 * std::max(1.0, std::abs(v.payoff[i]));
    judge(v.undominated[i], ctx.strategyBand[i], epsS, Condition::Undominated, i);
    judge(v.minmax[i], ctx.payoffBand[i], epsP, Condition::Minmax, i);
    judge(v.investment[i], ctx.strategyBand[i], epsS, Condition::InvestmentDirection, i);
    if (v.sufficient[i] <= ctx.payoffBand[i]) {
      sufficient = false;
      if (v.sufficient[i] > -ctx.payoffBand[i]) near = true;
    }
  }
  if (outside)
    v.status = Verdict::NonMember;
  else if (near)
    v.status = Verdict::Boundary;
  else if (sufficient)
    v.status = Verdict::MemberSufficient;
  else
    v.status = Verdict::MemberNecessaryOnly;
  return v;
}

MembershipVerdict membershipTest(const Game& g, const Profile& s) {
  for (int i = 0; i < 2; ++i) validateStrategy(g, i, s[i]);
  auto ctx = membershipContext(g);
  if (isInterval(g)) return membershipTest(ctx, s[0].x, s[1].x);
  return membershipTest(ctx, s[0].w[0], s[1].w[0]);
}

RegionRaster rasterizeRegion(const MembershipContext& ctx, Exec exec) {
  const IntervalGame& g = *ctx.game;
  const int R = ctx.resolution;
  RegionRaster r;
  r.resolution = R;
  r.lo = g.lo;
  r.hi = g.hi;
  r.step = ctx.step;
  r.cells.resize(static_cast<size_t>(R) * R);
  // Each best reply depends on one coordinate only, so tabulate per axis.
  std::vector<Interval> br1(R), br2(R);
  forEachIndex(R, exec, [&](int k) {
    br1[k] = bestReplyInterval(g, 0, ctx.cellCenter(1, k)).arg;
    br2[k] = bestReplyInterval(g, 1, ctx.cellCenter(0, k)).arg;
  });
  forEachIndex(R, exec, [&](int a) {
    const double s1 = ctx.cellCenter(0, a);
    for (int b = 0; b < R; ++b) {
      std::array<Interval, 2> br{br1[b], br2[a]};
      r.cells[static_cast<size_t>(a) * R + b] = membershipTest(ctx, s1, ctx.cellCenter(1, b), &br);
    }
  });
  return r;
}

RegionRaster rasterizeRegion(const Game& g, int resolution, Exec exec) {
  return rasterizeRegion(membershipContext(g, resolution, exec), exec);
}

void addMarkers(RegionRaster& r, const Game& g) {
  const Game view = isInterval(g) ? g : Game(toIntervalForm(asFinite(g)));
  for (const auto& p : nashEquilibria(view).profiles) r.markers.push_back({"nash", p[0].x, p[1].x});
  for (int i = 0; i < 2; ++i) {
    auto st = stackelberg(view, i);
    Marker m{"stackelberg" + std::to_string(i + 1), 0, 0};
    (i == 0 ? m.s1 : m.s2) = st.leader.x;
    (i == 0 ? m.s2 : m.s1) = st.follower.x;
    r.markers.push_back(m);
  }
}

NashBBE nashAsBBE(const Game& g, const Profile& nash, bool requireStrict) {
  for (int i = 0; i < 2; ++i) validateStrategy(g, i, nash[i]);
  const PerceivedGame pg = perceivedGame(g);
  if (!isPerceivedEquilibrium(pg, nash))
    throw PreconditionError("profile (" + describe(nash[0]) + ", " + describe(nash[1]) + ") is not a Nash equilibrium");
  NashBBE out;
  out.config.beliefs = {BiasedBelief::blind(nash[1]), BiasedBelief::blind(nash[0])};
  out.config.strategies = nash;
  bool strict = true;
  for (int i = 0; i < 2; ++i) {
    const int j = other(i);
    if (isInterval(g)) {
      const auto& ig = asInterval(g);
      Interval B = bestReplyInterval(ig, i, nash[j].x).arg;
      strict = strict && B.singleton() && std::abs(B.lo - nash[i].x) <= 1e-6 * ig.width(i);
    } else {
      auto br = pureBestReplies(asFinite(g).own(i), nash[j].w);
      strict = strict && br.size() == 1 && nash[i].w[br[0]] > 1.0 - kSimplexTol;
    }
  }
  if (requireStrict && !strict) throw PreconditionError("Nash equilibrium is not strict");
  out.strong = strict;
  return out;
}

ZeroSumResult zeroSumCheck(const Game& g) {
  ZeroSumResult out;
  if (isInterval(g)) {
    const auto& ig = asInterval(g);
    const int n = 32;
    double mn = INFINITY, mx = -INFINITY, pmn = INFINITY, pmx = -INFINITY, sum = 0.0;
    for (int a = 0; a <= n; ++a)
      for (int b = 0; b <= n; ++b) {
        double s1 = ig.lo[0] + ig.width(0) * a / n, s2 = ig.lo[1] + ig.width(1) * b / n;
        double p1 = ig.u12(0, s1, s2), p2 = ig.u12(1, s1, s2);
        mn = std::min(mn, p1 + p2);
        mx = std::max(mx, p1 + p2);
        pmn = std::min({pmn, p1, p2});
        pmx = std::max({pmx, p1, p2});
        sum += p1 + p2;
      }
    out.isZeroSum = mx - mn <= 1e-9 * std::max(1.0, pmx - pmn);
    out.constant = sum / ((n + 1) * (n + 1));
    // Player 1's guarantee: the opponent minimises pi_1 by its own reply
    // only in the constant-sum case; otherwise fall back to a direct scan.
    std::vector<double> xs(kDefaultGrid + 1);
    for (int k = 0; k <= kDefaultGrid; ++k) xs[k] = ig.lo[0] + ig.width(0) * k / kDefaultGrid;
    double best = -INFINITY;
    for (double s1 : xs) {
      double worst;
      if (out.isZeroSum) {
        worst = out.constant - bestReplyInterval(ig, 1, s1).value;
      } else {
        auto r = argmaxConcave([&](double s2) { return -ig.u12(0, s1, s2); }, ig.lo[1], ig.hi[1]);
        worst = -r.value;
      }
      best = std::max(best, worst);
    }
    out.value1 = best;
    return out;
  }
  const auto& fg = asFinite(g);
  const Eigen::MatrixXd S = fg.payoff[0] + fg.payoff[1];
  const double range = std::max(fg.payoff[0].maxCoeff(), fg.payoff[1].maxCoeff()) -
                       std::min(fg.payoff[0].minCoeff(), fg.payoff[1].minCoeff());
  out.isZeroSum = S.maxCoeff() - S.minCoeff() <= 1e-9 * std::max(1.0, range);
  out.constant = S.mean();
  // max v s.t. A' x >= v, sum x = 1 on shifted payoffs.
  const Eigen::MatrixXd& A = fg.payoff[0];
  const double shift = 1.0 - A.minCoeff();
  const int n1 = fg.n(0), n2 = fg.n(1);
  Eigen::MatrixXd Aub(n2, n1 + 1);
  Aub.leftCols(n1) = -(A.array() + shift).matrix().transpose();
  Aub.col(n1).setOnes();
  Eigen::MatrixXd Aeq = Eigen::MatrixXd::Zero(1, n1 + 1);
  Aeq.row(0).head(n1).setOnes();
  Eigen::VectorXd c = Eigen::VectorXd::Zero(n1 + 1);
  c[n1] = 1.0;
  auto res = solveLP(c, Aub, Eigen::VectorXd::Zero(n2), Aeq, Eigen::VectorXd::Ones(1));
  Eigen::VectorXd x = res.x.head(n1).cwiseMax(0.0);
  x /= x.sum();
  out.value1 = (A.transpose() * x).minCoeff();
  return out;
}

std::vector<DominantStrategy> dominantStrategies(const Game& g) {
  std::vector<DominantStrategy> out;
  for (int i = 0; i < 2; ++i) {
    const int j = other(i);
    if (isInterval(g)) {
      const auto& ig = asInterval(g);
      const int n = 64;
      bool ok = true;
      double x = 0.0;
      for (int b = 0; b <= n && ok; ++b) {
        Interval B = bestReplyInterval(ig, i, ig.lo[j] + ig.width(j) * b / n).arg;
        if (!B.singleton()) ok = false;
        else if (b == 0) x = B.lo;
        else if (std::abs(B.lo - x) > 1e-7 * ig.width(i)) ok = false;
      }
      if (ok) out.push_back({i, Strategy(x)});
      continue;
    }
    const auto& fg = asFinite(g);
    const Eigen::MatrixXd A = fg.own(i);
    for (int a = 0; a < fg.n(i); ++a) {
      bool dom = fg.n(i) > 1;
      for (int b = 0; b < fg.n(i) && dom; ++b)
        if (b != a && (A.row(a) - A.row(b)).minCoeff() <= 0.0) dom = false;
      if (dom) out.push_back({i, Strategy::pure(fg.n(i), a)});
    }
  }
  return out;
}

std::optional<DominantStrategy> dominantStrategyCheck(const Game& g) {
  auto all = dominantStrategies(g);
  if (all.empty()) return std::nullopt;
  return all.front();
}

std::array<AttitudeReport, 2> wishfulThinkingCheck(const Game& g, const Configuration& c) {
  if (!isInterval(g)) throw UnsupportedError("attitude check needs an interval game");
  const auto& ig = asInterval(g);
  const GameClass gc = classify(ig);
  if (gc.externalities != Externalities::Positive)
    throw UnsupportedError("wishful thinking reduces to a strategy comparison only under positive externalities");
  std::array<AttitudeReport, 2> out;
  for (int i = 0; i < 2; ++i) {
    const int j = other(i);
    out[i].actual = c.strategies[j].x;
    out[i].perceived = c.beliefs[i](out[i].actual);
    const double tol = 1e-9 * ig.width(j), own = c.strategies[i].x, end = 1e-9 * ig.width(i);
    if (std::abs(own - ig.lo[i]) <= end || std::abs(own - ig.hi[i]) <= end)
      out[i].attitude = Attitude::ExemptExtreme;
    else if (out[i].perceived > out[i].actual + tol)
      out[i].attitude = Attitude::Wishful;
    else if (out[i].perceived < out[i].actual - tol)
      out[i].attitude = Attitude::Pessimistic;
    else
      out[i].attitude = Attitude::Neutral;
  }
  return out;
}

}  // namespace bbe
