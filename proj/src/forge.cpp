#include "bbe/forge.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bbe {

namespace {

constexpr int kSideSamples = 128;
// Slope of the extra push away from the threshold; keeps the forged belief
// strictly on the punishing side wherever it is not clamped to the boundary.
constexpr double kMargin = 0.05;

std::string refusal(const MembershipVerdict& v) {
  std::ostringstream os;
  os << "target is " << toString(v.status) << ", not member_sufficient";
  for (int i = 0; i < 2; ++i)
    os << "; player " << i + 1 << " margins: undominated " << v.undominated[i] << ", minmax " << v.minmax[i]
       << ", sufficient " << v.sufficient[i] << ", investment " << v.investment[i];
  return os.str();
}

// Best replies are single-valued on a 65-point opponent sweep for both players.
bool uniqueReplies(const IntervalGame& g) {
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k <= 64; ++k)
      if (!bestReplyInterval(g, i, g.lo[other(i)] + g.width(other(i)) * k / 64).arg.singleton()) return false;
  return true;
}

// Belief held by player j about the deviator i. `up` means player j's best
// reply rises with its belief about i, so the punishing side lies below s_i*.
ThresholdMap thresholdSide(const IntervalGame& g, int i, const Profile& target, bool up) {
  const int j = other(i);
  ThresholdMap t;
  t.deviator = i;
  t.upward = up;
  t.target = target[i].x;
  const Game view = g;
  const auto inv = inverseBestReply(view, j, target[j]);
  if (inv.intervals.empty())
    throw PreconditionError("player " + std::to_string(j + 1) + "'s target strategy is never a best reply");
  t.endpoint = up ? inv.intervals.front().lo : inv.intervals.back().hi;

  const double star = g.u(i, target[i].x, target[j].x);
  auto worst = [&](double si, double sp) { return g.u(i, si, bestReplyInterval(g, j, sp).arg.hi); };
  const double lo = g.lo[i], hi = g.hi[i], sStar = target[i].x;
  const int N = kSideSamples;
  if (up ? sStar <= lo : sStar >= hi) return t;

  for (int k = 0; k < N; ++k) {
    double s = up ? lo + (sStar - lo) * k / N : sStar + (hi - sStar) * (k + 1) / N;
    // X(s) is an interval anchored at the punishing end of S_i; find its edge.
    double keep = up ? lo : hi, lose = up ? hi : lo;
    double phi;
    if (worst(s, lose) <= star) {
      phi = lose;
    } else if (worst(s, keep) > star) {
      throw PreconditionError("no punishing belief exists against player " + std::to_string(i + 1) +
                              " at s = " + formatNumber(s));
    } else {
      for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (keep + lose);
        (worst(s, mid) <= star ? keep : lose) = mid;
      }
      phi = keep;
    }
    t.s.push_back(s);
    t.phi.push_back(phi);
  }
  t.belief.resize(N);
  if (up) {
    double env = t.endpoint;
    for (int k = N - 1; k >= 0; --k) {
      env = std::min(env, t.phi[k]);
      t.belief[k] = std::max(lo, env - kMargin * (sStar - t.s[k]));
    }
  } else {
    double env = t.endpoint;
    for (int k = 0; k < N; ++k) {
      env = std::max(env, t.phi[k]);
      t.belief[k] = std::min(hi, env + kMargin * (t.s[k] - sStar));
    }
  }
  return t;
}

BiasedBelief beliefFromSide(const IntervalGame& g, const ThresholdMap& t) {
  const int i = t.deviator;
  std::vector<std::pair<double, double>> pts;
  if (t.upward) {
    for (size_t k = 0; k < t.s.size(); ++k) pts.emplace_back(t.s[k], t.belief[k]);
    pts.emplace_back(t.target, t.endpoint);
    if (t.target < g.hi[i]) pts.emplace_back(g.hi[i], t.endpoint);
  } else {
    if (t.target > g.lo[i]) pts.emplace_back(g.lo[i], t.endpoint);
    pts.emplace_back(t.target, t.endpoint);
    for (size_t k = 0; k < t.s.size(); ++k) pts.emplace_back(t.s[k], t.belief[k]);
  }
  return BiasedBelief::piecewise(std::move(pts));
}

Forged forgeClass(const Game& g, const Profile& target, std::optional<Differences> expect) {
  const MembershipContext ctx = membershipContext(g);
  if (expect && ctx.cls.differences != *expect)
    throw UnsupportedError(std::string("construction needs ") + toString(*expect) + "; game has " + ctx.cls.summary());
  const IntervalGame& ig = *ctx.game;
  Profile t = target;
  if (!isInterval(g))
    for (int i = 0; i < 2; ++i) t[i] = Strategy(target[i].w[0]);
  for (int i = 0; i < 2; ++i) validateStrategy(ig, i, t[i]);
  const MembershipVerdict v = membershipTest(ctx, t[0].x, t[1].x);
  if (v.status != Verdict::MemberSufficient) throw PreconditionError(refusal(v));

  Forged out;
  out.construction = std::string("monotone threshold construction (") + toString(ctx.cls.differences) + ")";
  out.config.strategies = t;
  for (int i = 0; i < 2; ++i) {
    const int j = other(i);
    // Player j's reply rises with its belief when its payoff has the
    // positive cross-partial.
    const bool up = ctx.cls.differences == Differences::Complements ||
                    (ctx.cls.differences == Differences::Opposites && j == ctx.cls.complementPlayer);
    out.thresholds.push_back(thresholdSide(ig, i, t, up));
    out.config.beliefs[j] = beliefFromSide(ig, out.thresholds.back());
  }
  const Game view = ig;
  checkConfiguration(view, out.config);
  out.monotone = isMonotone(out.config.beliefs[0], view, 0) && isMonotone(out.config.beliefs[1], view, 1);
  out.strongClaim = ctx.cls.differences != Differences::Opposites && uniqueReplies(ig);
  if (!isInterval(g)) out.note = "built on the two-action interval form; strategies are first-action probabilities";
  return out;
}

double probeConvexity(const IntervalGame& g, int i, bool ownConcaveStrict) {
  // Returns the worst violation: for strict own concavity the smallest
  // midpoint gain, otherwise the largest midpoint excess in the opponent.
  const int n = 32, j = other(i);
  double worst = ownConcaveStrict ? INFINITY : -INFINITY;
  for (int b = 0; b <= n; ++b)
    for (int a = 1; a < n; ++a)
      for (int h = 1; a - h >= 0 && a + h <= n; h *= 2) {
        const int fixedAxis = ownConcaveStrict ? j : i, moving = ownConcaveStrict ? i : j;
        const double f = g.lo[fixedAxis] + g.width(fixedAxis) * b / n;
        auto at = [&](int k) {
          const double m = g.lo[moving] + g.width(moving) * k / n;
          return ownConcaveStrict ? g.u(i, m, f) : g.u(i, f, m);
        };
        const double gap = at(a) - 0.5 * (at(a - h) + at(a + h));
        worst = ownConcaveStrict ? std::min(worst, gap) : std::max(worst, gap);
      }
  return worst;
}

double inverseReplyPoint(const IntervalGame& g, int j, double y) {
  const Game view = g;
  const auto inv = inverseBestReply(view, j, Strategy(y));
  if (inv.intervals.empty())
    throw PreconditionError("strategy " + formatNumber(y) + " of player " + std::to_string(j + 1) +
                            " is never a best reply");
  return inv.intervals.front().mid();
}

}  // namespace

Forged forgeComplements(const Game& g, const Profile& target) {
  return forgeClass(g, target, Differences::Complements);
}

Forged forgeSubstitutes(const Game& g, const Profile& target) {
  return forgeClass(g, target, Differences::Substitutes);
}

Forged forgeOpposites(const Game& g, const Profile& target) {
  return forgeClass(g, target, Differences::Opposites);
}

Forged forgeMonotone(const Game& g, const Profile& target) { return forgeClass(g, target, std::nullopt); }

namespace {

// Blind target for the leader: an opponent strategy against which `lead` is
// a best reply, preferring one where that reply is unique.
std::pair<double, bool> stubbornTarget(const IntervalGame& ig, int i, double lead) {
  const Game view = ig;
  const auto inv = inverseBestReply(view, i, Strategy(lead));
  if (inv.intervals.empty()) throw std::logic_error("leader strategy is not a best reply to anything");
  for (const auto& iv : inv.intervals)
    for (double y : {iv.lo, iv.mid(), iv.hi})
      if (bestReplyInterval(ig, i, y).arg.singleton()) return {y, true};
  return {inv.intervals.front().lo, false};
}

}  // namespace

Forged forgeStackelbergStubborn(const Game& g, int leader) {
  const int i = leader, j = other(i);
  const StackelbergResult st = stackelberg(g, i);
  Forged out;
  out.construction = "stubborn Stackelberg leader (player " + std::to_string(i + 1) + ")";
  out.config.strategies[i] = st.leader;
  out.config.strategies[j] = st.follower;
  out.config.beliefs[j] = BiasedBelief::identity();
  if (isInterval(g)) {
    const auto [pick, unique] = stubbornTarget(asInterval(g), i, st.leader.x);
    out.config.beliefs[i] = BiasedBelief::blind(Strategy(pick));
    out.strongClaim = unique;
  } else {
    const auto& fg = asFinite(g);
    const auto supp = supportOf(st.leader.w);
    auto w = exactBestReplyWitness(fg.own(i), supp);
    if (!w) w = supportWitness(fg.own(i), supp);
    if (!w) throw std::logic_error("Stackelberg strategy is not a best reply to anything");
    out.config.beliefs[i] = BiasedBelief::blind(Strategy(*w));
    out.strongClaim = supp.size() == 1 && exactBestReplyWitness(fg.own(i), supp).has_value();
  }
  checkConfiguration(g, out.config);
  if (!st.caveat.empty()) out.note = st.caveat;
  return out;
}

Forged forgeStackelbergPartial(const Game& g, int leader, double p) {
  if (!isInterval(g)) throw UnsupportedError("partial-observability leader construction needs an interval game");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("observation probability must lie in [0, 1], got " + formatNumber(p));
  const auto& ig = asInterval(g);
  const int i = leader, j = other(i);
  auto follow = [&](double x) { return bestReplyInterval(ig, j, x).arg.mid(); };
  double x = stackelberg(g, i).leader.x;
  for (int it = 0; it < 200; ++it) {
    const double y = follow(x);
    auto f = [&](double s) { return p * ig.u(i, s, follow(s)) + (1.0 - p) * ig.u(i, s, y); };
    const double next = argmaxConcave(f, ig.lo[i], ig.hi[i]).arg.mid();
    const bool done = std::abs(next - x) <= 1e-12 * ig.width(i);
    x = next;
    if (done) break;
  }
  Forged out;
  out.construction = "stubborn leader under observation probability " + formatNumber(p);
  out.config.strategies[i] = Strategy(x);
  out.config.strategies[j] = Strategy(follow(x));
  out.config.beliefs[j] = BiasedBelief::identity();
  const auto [pick, unique] = stubbornTarget(ig, i, x);
  out.config.beliefs[i] = BiasedBelief::blind(Strategy(pick));
  out.strongClaim = unique;
  checkConfiguration(g, out.config);
  return out;
}

Forged forgeFolkFinite(const Game& g, const Profile& target) {
  if (isInterval(g)) throw UnsupportedError("finite folk construction needs a finite game");
  const auto& fg = asFinite(g);
  for (int i = 0; i < 2; ++i) validateStrategy(g, i, target[i]);
  Forged out;
  out.construction = "blind beliefs at full-undominated-support witnesses";
  out.monotone = true;
  PunishmentProfile pp;
  for (int j = 0; j < 2; ++j) {
    const int i = other(j);
    const auto U = undominatedSet(g, j);
    std::vector<int> actions;
    for (const auto& s : U.supports) actions.insert(actions.end(), s.begin(), s.end());
    std::sort(actions.begin(), actions.end());
    actions.erase(std::unique(actions.begin(), actions.end()), actions.end());
    const auto w = supportWitness(fg.own(j), actions);
    if (!w)
      throw PreconditionError("game does not admit best replies with full undominated support: player " +
                              std::to_string(j + 1) + " has no opponent strategy making all undominated actions best replies");
    out.config.beliefs[j] = BiasedBelief::blind(Strategy(*w));

    if (!supportWitness(fg.own(i), supportOf(target[i].w)))
      throw PreconditionError("target strategy of player " + std::to_string(i + 1) + " is dominated");
    const auto mu = undominatedMinmax(g, i);
    const double pay = fg.u(i, target[i].w, target[j].w);
    pp.punisher[i] = mu.opponent;
    pp.D[i] = pay - mu.value;
    if (pp.D[i] < -kReplyTol * std::max(1.0, std::abs(pay)))
      throw PreconditionError("target payoff of player " + std::to_string(i + 1) + " is below the undominated minmax " +
                              formatNumber(mu.value));
  }
  out.config.strategies = target;
  checkConfiguration(g, out.config);
  out.punishment = pp;
  return out;
}

Forged forgeFolkInterval(const Game& g, const Profile& target) {
  if (!isInterval(g)) throw UnsupportedError("interval folk construction needs an interval game");
  const auto& ig = asInterval(g);
  for (int i = 0; i < 2; ++i) validateStrategy(g, i, target[i]);
  for (int i = 0; i < 2; ++i) {
    const double scale = 1e-12 * std::max(1.0, std::abs(ig.u(i, target[i].x, target[other(i)].x)));
    if (probeConvexity(ig, i, true) <= scale)
      throw PreconditionError("payoff of player " + std::to_string(i + 1) + " is not strictly concave in own strategy");
    if (probeConvexity(ig, i, false) > scale)
      throw PreconditionError("payoff of player " + std::to_string(i + 1) + " is not convex in the opponent's strategy");
  }
  PunishmentProfile pp;
  double ratio = INFINITY;
  for (int i = 0; i < 2; ++i) {
    const int j = other(i);
    const auto U = undominatedSet(g, i);
    if (!U.contains(target[i], 1e-9 * ig.width(i)))
      throw PreconditionError("target strategy of player " + std::to_string(i + 1) + " is dominated");
    const auto mu = undominatedMinmax(g, i);
    const double pay = ig.u(i, target[i].x, target[j].x);
    pp.punisher[i] = mu.opponent;
    pp.D[i] = pay - mu.value;
    pp.K[i] = 1.25 * lipschitzBound(ig, i, i);
    if (pp.D[i] <= kReplyTol * std::max(1.0, std::abs(pay)))
      throw PreconditionError("target payoff of player " + std::to_string(i + 1) +
                              " does not strictly exceed the undominated minmax " + formatNumber(mu.value));
    ratio = std::min(ratio, pp.D[i] / pp.K[i]);
  }
  pp.epsilon = 0.5 * ratio;
  const double eps = pp.epsilon;

  Forged out;
  out.construction = "psi-epsilon blend towards the punishing strategy";
  out.config.strategies = target;
  for (int i = 0; i < 2; ++i) {
    const int j = other(i);
    const double sStar = target[i].x, tStar = target[j].x, tPun = pp.punisher[i].x;
    // Player j believes a deviation of size d is the strategy it would
    // answer with the blend of its target and punishing strategies.
    auto value = [&](double d) {
      const double r = std::min(d, eps) / eps;
      return inverseReplyPoint(ig, j, (1.0 - r) * tStar + r * tPun);
    };
    std::vector<double> xs{ig.lo[i], ig.hi[i]};
    for (int k = 0; k <= 32; ++k) {
      const double d = eps * k / 32;
      for (double x : {sStar - d, sStar + d})
        if (x >= ig.lo[i] && x <= ig.hi[i]) xs.push_back(x);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end(), [&](double a, double b) { return b - a <= 1e-12 * ig.width(i); }),
             xs.end());
    std::vector<std::pair<double, double>> pts;
    for (double x : xs) pts.emplace_back(x, value(std::abs(x - sStar)));
    out.config.beliefs[j] = BiasedBelief::piecewise(std::move(pts));
  }
  checkConfiguration(g, out.config);
  out.monotone = isMonotone(out.config.beliefs[0], g, 0) && isMonotone(out.config.beliefs[1], g, 1);
  out.strongClaim = true;
  out.punishment = pp;
  return out;
}

}  // namespace bbe
