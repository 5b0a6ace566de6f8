#include "bbe/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "bbe/characterize.hpp"

namespace bbe {

const char* toString(Claim c) {
  switch (c) {
    case Claim::Weak: return "weak";
    case Claim::Bbe: return "bbe";
    case Claim::Strong: return "strong";
  }
  return "?";
}

Claim parseClaim(const std::string& s) {
  if (s == "weak") return Claim::Weak;
  if (s == "bbe") return Claim::Bbe;
  if (s == "strong") return Claim::Strong;
  throw ValidationError("unknown claim '" + s + "' (expected weak, bbe or strong)");
}

std::string DeviationFamily::describe() const {
  std::ostringstream os;
  os << "blind=" << blindGrid << ",simplex=" << simplexResolution << ",identity=" << (includeIdentity ? 1 : 0)
     << ",pw=" << piecewiseSamples << ",seed=" << seed << ",custom=" << custom.size();
  return os.str();
}

namespace {

void compositions(int n, int total, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == n - 1) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int k = total; k >= 0; --k) {
    cur.push_back(k);
    compositions(n, total - k, cur, out);
    cur.pop_back();
  }
}

Eigen::VectorXd dirichlet(int n, std::mt19937_64& rng) {
  std::gamma_distribution<double> gamma(1.0, 1.0);
  Eigen::VectorXd v(n);
  for (int k = 0; k < n; ++k) v[k] = gamma(rng);
  return v / v.sum();
}

}  // namespace

std::vector<BiasedBelief> familyBeliefs(const Game& g, int deviator, const DeviationFamily& family) {
  const int j = other(deviator);
  std::vector<BiasedBelief> out;
  if (family.includeIdentity) out.push_back(BiasedBelief::identity());
  // Separate streams per deviator keep one player's family independent of
  // the other's size.
  std::mt19937_64 rng(family.seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(deviator + 1));
  if (isInterval(g)) {
    const auto& ig = asInterval(g);
    const double lo = ig.lo[j], hi = ig.hi[j];
    const int n = std::max(family.blindGrid, 2);
    for (int k = 0; k < n; ++k) out.push_back(BiasedBelief::blind(Strategy(k == n - 1 ? hi : lo + (hi - lo) * k / (n - 1))));
    std::uniform_real_distribution<double> U(lo, hi);
    for (int k = 0; k < family.piecewiseSamples; ++k) {
      std::array<double, 2> in{U(rng), U(rng)};
      std::array<double, 4> val{U(rng), U(rng), U(rng), U(rng)};
      std::sort(in.begin(), in.end());
      std::sort(val.begin(), val.end());
      if (!(in[0] > lo && in[1] > in[0] && hi > in[1])) continue;
      out.push_back(BiasedBelief::piecewise({{lo, val[0]}, {in[0], val[1]}, {in[1], val[2]}, {hi, val[3]}}));
    }
  } else {
    const int n = asFinite(g).n(j);
    if (n <= 3) {
      const int R = n == 2 ? std::max(family.blindGrid - 1, 1) : std::max(family.simplexResolution, 1);
      std::vector<std::vector<int>> comps;
      std::vector<int> cur;
      compositions(n, R, cur, comps);
      for (const auto& c : comps) {
        Eigen::VectorXd w(n);
        for (int k = 0; k < n; ++k) w[k] = static_cast<double>(c[k]) / R;
        out.push_back(BiasedBelief::blind(Strategy(w)));
      }
    } else {
      for (int k = 0; k < n; ++k) out.push_back(BiasedBelief::blind(Strategy::pure(n, k)));
      out.push_back(BiasedBelief::blind(Strategy::uniform(n)));
    }
    for (int k = 0; k < family.piecewiseSamples; ++k) {
      Eigen::MatrixXd m(n, n);
      for (int c = 0; c < n; ++c) m.col(c) = dirichlet(n, rng);
      out.push_back(BiasedBelief::stochastic(std::move(m)));
    }
  }
  for (const auto& b : family.custom) {
    validateBelief(g, deviator, b);
    out.push_back(b);
  }
  return out;
}

PerceivedGame restrictedBiasedGame(const Game& g, int deviator, const BiasedBelief& dev, const BiasedBelief& incumbent,
                                   const Profile& target, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("observation probability must lie in [0, 1], got " + formatNumber(p));
  const int i = deviator, j = other(i);
  BiasedGame bg{&g, {}};
  bg.beliefs[i] = dev;
  bg.beliefs[j] = incumbent;
  PerceivedGame pg = perceivedGame(bg);
  if (p == 1.0) return pg;

  if (isInterval(g)) {
    const IntervalGame* ig = &asInterval(g);
    const double tj = target[j].x;
    const double seenStar = dev(tj);
    const BiasedBelief inc = incumbent;
    auto devF = pg.f[i];
    pg.f[i] = [ig, i, p, devF, seenStar](double own, double opp) {
      return p * devF(own, opp) + (1.0 - p) * ig->u(i, own, seenStar);
    };
    pg.f[j] = [ig, j, p, inc, tj](double own, double opp) {
      const double seen = inc.kind == BeliefKind::Identity ? opp : inc(opp);
      return p * ig->u(j, own, seen) + (1.0 - p) * ig->u(j, tj, seen);
    };
    pg.independent[i] = pg.independent[i] || p == 0.0;
    return pg;
  }
  const auto& fg = asFinite(g);
  const int nj = fg.n(j);
  const Eigen::VectorXd& sj = target[j].w;
  const Eigen::MatrixXd Bi = beliefMatrix(dev, nj);
  const Eigen::MatrixXd mix = p * Eigen::MatrixXd::Identity(nj, nj) + (1.0 - p) * sj * Eigen::RowVectorXd::Ones(nj);
  pg.P[i] = fg.own(i) * Bi * mix;
  const Eigen::MatrixXd OjBj = fg.own(j) * beliefMatrix(incumbent, fg.n(i));
  const Eigen::RowVectorXd frozen = sj.transpose() * OjBj;
  pg.P[j] = p * OjBj + (1.0 - p) * Eigen::VectorXd::Ones(fg.n(j)) * frozen;
  pg.independent[i] = pg.independent[i] || p == 0.0;
  return pg;
}

double realizedPayoff(const Game& g, int deviator, const Profile& eq, const Profile& target, double p) {
  const int i = deviator, j = other(i);
  const double seen = payoff(g, i, eq[i], eq[j]);
  if (p == 1.0) return seen;
  return p * seen + (1.0 - p) * payoff(g, i, eq[i], target[j]);
}

DeviationResult evaluateDeviation(const Game& g, const Configuration& c, int deviator, const BiasedBelief& dev, double p,
                                  int grid) {
  const int j = other(deviator);
  const PerceivedGame pg = restrictedBiasedGame(g, deviator, dev, c.beliefs[j], c.strategies, p);
  DeviationResult r;
  r.equilibria = plausibleFilter(pg, c, deviator, solveEquilibria(pg, grid));
  const double base = payoff(g, deviator, c.strategies[deviator], c.strategies[j]);
  for (const auto& e : r.equilibria.profiles) r.gains.push_back(realizedPayoff(g, deviator, e, c.strategies, p) - base);
  return r;
}

namespace {

VerificationReport run(const Game& g, const Configuration& c, Claim claim, const DeviationFamily& family, double p,
                       const VerifyOptions& opt) {
  checkConfiguration(g, c);
  if (claim != Claim::Weak && !opt.allowNonMonotone)
    for (int i = 0; i < 2; ++i)
      if (!isMonotone(c.beliefs[i], g, i))
        throw PreconditionError(std::string("claim ") + toString(claim) + " needs monotone beliefs; the belief of player " +
                                std::to_string(i + 1) + " (" + describe(c.beliefs[i]).substr(0, 80) + ") is not monotone");

  VerificationReport rep;
  rep.claim = claim;
  if (p != 1.0) rep.p = p;
  rep.family = family.describe();
  for (int i = 0; i < 2; ++i) rep.incumbentPayoff[i] = payoff(g, i, c.strategies[i], c.strategies[other(i)]);

  struct Work {
    int deviator;
    int index;
    const BiasedBelief* belief;
  };
  std::array<std::vector<BiasedBelief>, 2> beliefs{familyBeliefs(g, 0, family), familyBeliefs(g, 1, family)};
  std::vector<Work> work;
  for (int i = 0; i < 2; ++i)
    for (size_t k = 0; k < beliefs[i].size(); ++k) work.push_back({i, static_cast<int>(k), &beliefs[i][k]});

  std::vector<DeviationResult> results(work.size());
  forEachIndex(static_cast<int>(work.size()), opt.exec, [&](int k) {
    results[k] = evaluateDeviation(g, c, work[k].deviator, *work[k].belief, p, opt.grid);
  });

  const double tol = opt.tolerance;
  auto refutes = [&](const std::vector<double>& gains, bool strong) {
    if (gains.empty()) return false;
    const double v = strong ? *std::max_element(gains.begin(), gains.end()) : *std::min_element(gains.begin(), gains.end());
    return v > tol;
  };
  int emptySolves = 0;
  for (size_t k = 0; k < work.size(); ++k) {
    const auto& r = results[k];
    const auto& eqs = r.equilibria;
    DeviationOutcome o;
    o.deviator = work[k].deviator;
    o.familyIndex = work[k].index;
    o.equilibria = static_cast<int>(eqs.profiles.size());
    o.complete = eqs.complete;
    rep.equilibriaExamined += o.equilibria;
    ++rep.deviationsTried;
    if (!eqs.complete) ++rep.incompleteSolves;
    if (r.gains.empty()) {
      ++emptySolves;
      rep.outcomes.push_back(o);
      continue;
    }
    std::vector<double> plausible;
    for (size_t e = 0; e < r.gains.size(); ++e)
      if (eqs.plausible[e]) plausible.push_back(r.gains[e]);
    o.minGain = *std::min_element(r.gains.begin(), r.gains.end());
    o.maxGain = *std::max_element(r.gains.begin(), r.gains.end());
    o.minPlausibleGain = plausible.empty() ? o.minGain : *std::min_element(plausible.begin(), plausible.end());
    rep.outcomes.push_back(o);

    bool bad = false;
    size_t pick = 0;
    switch (claim) {
      case Claim::Strong:
        bad = refutes(r.gains, true);
        pick = std::max_element(r.gains.begin(), r.gains.end()) - r.gains.begin();
        break;
      case Claim::Weak:
        bad = refutes(r.gains, false);
        pick = std::min_element(r.gains.begin(), r.gains.end()) - r.gains.begin();
        break;
      case Claim::Bbe: {
        bad = refutes(plausible, false);
        if (refutes(r.gains, false)) rep.unfilteredHolds = false;
        double best = INFINITY;
        for (size_t e = 0; e < r.gains.size(); ++e)
          if (eqs.plausible[e] && r.gains[e] < best) best = r.gains[e], pick = e;
        break;
      }
    }
    if (claim != Claim::Bbe && bad) rep.unfilteredHolds = false;
    if (bad && !rep.counterexample) {
      Counterexample cx;
      cx.deviator = work[k].deviator;
      cx.familyIndex = work[k].index;
      cx.belief = *work[k].belief;
      cx.equilibrium = eqs.profiles[pick];
      cx.gain = r.gains[pick];
      cx.incumbentPayoff = rep.incumbentPayoff[cx.deviator];
      cx.deviatorPayoff = cx.incumbentPayoff + cx.gain;
      rep.counterexample = cx;
    }
  }
  rep.holds = !rep.counterexample.has_value();

  std::ostringstream cav;
  if (rep.holds)
    cav << "holds_on_family means no counterexample among " << rep.deviationsTried
        << " deviations; it is not a proof over all beliefs";
  else
    cav << "refuted by a deviation among " << rep.deviationsTried << " tried";
  if (rep.incompleteSolves) cav << "; " << rep.incompleteSolves << " deviation games solved incompletely";
  if (emptySolves) cav << "; " << emptySolves << " deviation games had no equilibrium found";
  if (claim == Claim::Bbe && rep.holds != rep.unfilteredHolds)
    cav << "; the verdict depends on the plausibility filter (unfiltered: "
        << (rep.unfilteredHolds ? "holds" : "refuted") << ")";
  rep.caveat = cav.str();

  // Consistency guards from the general results on zero-sum games and
  // dominant strategies; a violation points at a solver defect.
  if (rep.holds) {
    const auto zs = zeroSumCheck(g);
    if (zs.isZeroSum) {
      const double tolZ = 1e-6 * std::max(1.0, std::abs(zs.value1));
      if (std::abs(rep.incumbentPayoff[0] - zs.value1) > tolZ)
        rep.guardViolations.push_back("zero-sum guard: incumbent payoff " + formatNumber(rep.incumbentPayoff[0]) +
                                      " differs from the value " + formatNumber(zs.value1));
    }
    if (dominantStrategyCheck(g)) {
      const PerceivedGame truth = perceivedGame(g);
      if (!isPerceivedEquilibrium(truth, c.strategies))
        rep.guardViolations.push_back("dominant-strategy guard: outcome is not a Nash equilibrium");
    }
  }
  return rep;
}

}  // namespace

VerificationReport verify(const Game& g, const Configuration& c, Claim claim, const DeviationFamily& family,
                          const VerifyOptions& opt) {
  return run(g, c, claim, family, 1.0, opt);
}

VerificationReport verifyP(const Game& g, const Configuration& c, Claim claim, const DeviationFamily& family, double p,
                           const VerifyOptions& opt) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("observation probability must lie in [0, 1], got " + formatNumber(p));
  return run(g, c, claim, family, p, opt);
}

}  // namespace bbe
