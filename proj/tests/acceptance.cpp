// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Numbers come from the oracles in oracle.hpp or closed
// forms checked by hand.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "bbe/io.hpp"
#include "bbe/library.hpp"
#include "oracle.hpp"

using namespace bbe;

namespace {

struct Check {
  std::ostringstream notes;
  bool ok = true;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes << " [failed: " << what << "]";
    }
  }
  void near(double got, double want, double tol, const std::string& what) {
    const bool good = std::abs(got - want) <= tol;
    if (!good) {
      ok = false;
      notes << " [failed: " << what << " = " << formatNumber(got) << ", expected " << formatNumber(want) << " +- "
            << formatNumber(tol) << "]";
    }
  }
};

int failures = 0;

void criterion(int n, const std::string& title, double budget, const std::function<void(Check&)>& body) {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.ok = false;
    c.notes << " [exception: " << e.what() << "]";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > budget) {
    c.ok = false;
    c.notes << " [runtime " << secs << " s exceeds " << budget << " s]";
  }
  std::printf("%s %d %s (%.2f s)%s\n", c.ok ? "PASS" : "FAIL", n, title.c_str(), secs, c.notes.str().c_str());
  std::fflush(stdout);
  if (!c.ok) ++failures;
}

Configuration config(BiasedBelief a, BiasedBelief b, Profile s) {
  Configuration c;
  c.beliefs = {std::move(a), std::move(b)};
  c.strategies = std::move(s);
  return c;
}

bool isMember(Verdict v) { return v == Verdict::MemberSufficient || v == Verdict::MemberNecessaryOnly; }

void expectExample(Check& c, const std::string& name) {
  const ExampleOutcome o = runExample(exampleByName(name));
  c.require(o.pass, name + ": " + o.detail);
}

// Mixed equilibrium of a 2x2 game: the profile with both coordinates strictly inside.
std::optional<Profile> mixedNash(const FiniteGame& g) {
  for (const auto& p : nashEquilibria(g).profiles)
    if (p[0].w[0] > 1e-9 && p[0].w[0] < 1 - 1e-9 && p[1].w[0] > 1e-9 && p[1].w[0] < 1 - 1e-9) return p;
  return std::nullopt;
}

}  // namespace

int main() {
  criterion(1, "Cournot: Nash, biased game G_(0,Id), refuted identity beliefs", 5.0, [](Check& c) {
    const Game g = cournotGame();
    const auto nash = nashEquilibria(g);
    c.require(nash.profiles.size() == 1, "unique Nash");
    c.near(nash.profiles[0][0].x, 1.0 / 3, 1e-4, "nash s1");
    c.near(nash.profiles[0][1].x, 1.0 / 3, 1e-4, "nash s2");
    c.near(payoff(g, 0, nash.profiles[0][0], nash.profiles[0][1]), 1.0 / 9, 1e-4, "nash payoff");

    BiasedGame bg{&g, {BiasedBelief::blind(Strategy(0.0)), BiasedBelief::identity()}};
    const auto eq = nashOfBiasedGame(bg);
    c.require(eq.profiles.size() == 1, "unique biased equilibrium");
    const auto o = oracle::cournot::blindDeviation(0.0);
    c.near(eq.profiles[0][0].x, o[0], 1e-4, "biased s1");
    c.near(eq.profiles[0][1].x, o[1], 1e-4, "biased s2");

    const auto rep = verify(g, config(BiasedBelief::identity(), BiasedBelief::identity(), nash.profiles[0]), Claim::Weak);
    c.require(!rep.holds && rep.counterexample.has_value(), "identity beliefs refuted");
    if (rep.counterexample) {
      c.near(rep.counterexample->deviatorPayoff, 0.125, 1e-4, "deviator payoff");
      c.near(rep.counterexample->incumbentPayoff, 1.0 / 9, 1e-4, "incumbent payoff");
      c.require(rep.counterexample->deviatorPayoff > rep.counterexample->incumbentPayoff, "1/8 > 1/9");
    }
  });

  criterion(2, "Cournot capacity: undominated set, M^U, region, Nash maximizes s1+s2", 30.0, [](Check& c) {
    const Game g = cournotCapacityGame();
    const double step = 1.0 / kDefaultGrid;
    for (int i = 0; i < 2; ++i) {
      const auto U = undominatedSet(g, i);
      c.near(U.lo(), 0.5, step, "undominated lo");
      c.near(U.hi(), 1.0, step, "undominated hi");
      c.near(undominatedMinmax(g, i).value, oracle::capacity::undominatedMinmax, 1e-4, "M^U");
    }
    c.near(payoff(g, 0, Strategy(0.75), Strategy(0.75)), 0.125, 1e-12, "Pareto payoff");
    c.require(!isMember(membershipTest(g, {Strategy(0.75), Strategy(0.75)}).status), "(3/4,3/4) excluded");
    c.require(isMember(membershipTest(g, {Strategy(2.0 / 3), Strategy(2.0 / 3)}).status), "(2/3,2/3) included");

    const MembershipContext ctx = membershipContext(g, 200);
    const RegionRaster r = rasterizeRegion(ctx);
    double best = -INFINITY;
    std::array<double, 2> arg{};
    for (int a = 0; a < 200; ++a)
      for (int b = 0; b < 200; ++b) {
        const double s1 = ctx.cellCenter(0, a), s2 = ctx.cellCenter(1, b);
        if (isMember(r.at(a, b).status) && s1 + s2 > best) best = s1 + s2, arg = {s1, s2};
      }
    // The Nash point is a corner of the region, so the best member cell is
    // the one next to it.
    c.near(best, 4.0 / 3, r.step[0] + r.step[1], "max s1+s2 over members");
    c.near(arg[0], oracle::capacity::nash, r.step[0], "maximising cell s1");
    c.near(arg[1], oracle::capacity::nash, r.step[1], "maximising cell s2");
    c.require(isMember(membershipTest(ctx, oracle::capacity::nash, oracle::capacity::nash).status),
              "Nash point is a member");
  });

  criterion(3, "Hotelling t=1, M=3: Nash, undominated set, M^U, displayed beliefs, corner", 60.0, [](Check& c) {
    const Game g = hotellingGame(1.0, 3.0);
    const auto nash = nashEquilibria(g);
    c.require(nash.profiles.size() == 1, "unique Nash");
    c.near(nash.profiles[0][0].x, 1.0, 1e-4, "nash s1");
    c.near(nash.profiles[0][1].x, 1.0, 1e-4, "nash s2");
    c.near(payoff(g, 0, nash.profiles[0][0], nash.profiles[0][1]), 0.5, 1e-4, "nash payoff");
    const double step = 3.0 / kDefaultGrid;
    for (int i = 0; i < 2; ++i) {
      const auto U = undominatedSet(g, i);
      c.near(U.lo(), 0.5, step, "undominated lo");
      c.near(U.hi(), 2.0, step, "undominated hi");
      c.near(undominatedMinmax(g, i).value, 9.0 / 32, 1e-4, "M^U");
    }

    const ConfigFile cf = loadConfig(std::string(BBE_DATA_DIR) + "/configs/hotelling_22.json");
    const auto rep = verify(g, cf.config, Claim::Bbe);
    c.require(rep.holds, "verify(bbe) on the displayed beliefs");
    c.require(rep.guardViolations.empty(), "no guard violations");
    const DeviationFamily fam;
    double worst = -INFINITY;
    for (int d = 0; d < 2; ++d)
      for (const auto& b : familyBeliefs(g, d, fam)) {
        if (!b.isBlind()) continue;
        const auto dr = evaluateDeviation(g, cf.config, d, b);
        for (double gain : dr.gains) worst = std::max(worst, rep.incumbentPayoff[d] + gain);
      }
    c.require(worst <= 1.0 + 1e-6, "blind deviation payoff " + formatNumber(worst) + " <= 1");

    const MembershipContext ctx = membershipContext(g, 200);
    const RegionRaster r = rasterizeRegion(ctx);
    int below = 0, members = 0;
    for (int a = 0; a < 200; ++a)
      for (int b = 0; b < 200; ++b)
        if (isMember(r.at(a, b).status)) {
          ++members;
          if (ctx.cellCenter(0, a) < 1.0 && ctx.cellCenter(1, b) < 1.0) ++below;
        }
    c.require(members > 0 && below == 0, "no member cell strictly below (1,1): " + std::to_string(below));
  });

  criterion(4, "Stackelberg: ((blind 0, Id), (1/2, 1/4)) verifies strong", 30.0, [](Check& c) {
    const Game g = cournotGame();
    const auto rep = verify(
        g, config(BiasedBelief::blind(Strategy(0.0)), BiasedBelief::identity(), {Strategy(0.5), Strategy(0.25)}),
        Claim::Strong);
    c.require(rep.holds, "strong holds on family");
    c.near(rep.incumbentPayoff[0], 0.125, 1e-4, "leader payoff");
    c.near(rep.incumbentPayoff[1], 0.0625, 1e-4, "follower payoff");
    const Forged f = forgeStackelbergStubborn(g, 0);
    c.near(f.config.strategies[0].x, 0.5, 1e-4, "forged leader");
    c.near(f.config.beliefs[0].target.x, 0.0, 1e-3, "forged blind target");
  });

  criterion(5, "p-BBE: closed form within 2 grid steps, payoffs monotone in p", 60.0, [](Check& c) {
    const Game g = cournotGame();
    const double step = 1.0 / kDefaultGrid;
    double prev1 = -INFINITY, prev2 = INFINITY;
    for (double p : {0.01, 0.25, 0.5, 0.75, 1.0}) {
      const std::string at = "p=" + formatNumber(p);
      const Forged f = forgeStackelbergPartial(g, 0, p);
      c.near(f.config.strategies[0].x, oracle::cournot::pLeader(p), 2 * step, at + " leader");
      c.near(f.config.strategies[1].x, oracle::cournot::pFollower(p), 2 * step, at + " follower");
      const auto rep = verifyP(g, f.config, Claim::Strong, {}, p);
      c.require(rep.holds, at + " verifies strong");
      const double u1 = rep.incumbentPayoff[0], u2 = rep.incumbentPayoff[1];
      c.require(u1 > prev1, at + " player 1 payoff increases");
      c.require(u2 < prev2, at + " player 2 payoff decreases");
      prev1 = u1;
      prev2 = u2;
    }
  });

  criterion(6, "Finite suite: PD-withdrawal, traveler's dilemma, stag hunt, hawk-dove, matching pennies", 120.0,
            [](Check& c) {
              expectExample(c, "pd_withdrawal");
              expectExample(c, "travelers_dilemma");
              const std::array<std::array<double, 2>, 3> params{{{0.5, 0.5}, {0.2, 0.7}, {0.8, 0.1}}};
              for (const auto& [gv, lv] : params) {
                const std::string at = "g=" + formatNumber(gv) + ",l=" + formatNumber(lv);
                const FiniteGame sh = stagHuntGame(gv, lv, gv, lv);
                const auto ms = mixedNash(sh);
                c.require(ms.has_value(), at + " stag hunt mixed equilibrium");
                if (ms) {
                  c.near(ms->at(0).w[0], stagHuntMixed(gv, lv), 1e-9, at + " stag alpha1");
                  c.near(ms->at(1).w[0], stagHuntMixed(gv, lv), 1e-9, at + " stag alpha2");
                  c.near(ms->at(0).w[0], oracle::mixedRow({{1, gv}, {-lv, 0}}), 1e-9, at + " stag oracle");
                }
                const FiniteGame hd = hawkDoveGame(gv, lv, gv, lv);
                const auto mh = mixedNash(hd);
                c.require(mh.has_value(), at + " hawk-dove mixed equilibrium");
                if (mh) {
                  c.near(mh->at(0).w[0], hawkDoveMixed(gv, lv), 1e-9, at + " dove alpha1");
                  c.near(mh->at(1).w[0], hawkDoveMixed(gv, lv), 1e-9, at + " dove alpha2");
                  c.near(mh->at(0).w[0], oracle::mixedRow({{1, 1 + gv}, {1 - lv, 0}}), 1e-9, at + " dove oracle");
                }
              }
              for (const char* n : {"mp_class1", "mp_class2", "mp_refuted_33", "mp_refuted_37"}) expectExample(c, n);
            });

  criterion(7, "Guards: zero-sum, dominant strategy, claim nesting, minmax order, raster agreement", 240.0,
            [](Check& c) {
              const auto zs = zeroSumCheck(rpsGame());
              c.require(zs.isZeroSum, "RPS is zero-sum");
              c.near(zs.value1, 0.0, 1e-9, "RPS value");
              const ExampleOutcome rps = runExample(exampleByName("rps"));
              c.require(rps.pass && rps.report && rps.report->guardViolations.empty(), "RPS bbe passes the guard");
              c.require(!zeroSumCheck(rpsTableGame()).isZeroSum, "0/1 table is not constant-sum");

              const auto dom = dominantStrategyCheck(prisonersDilemmaGame());
              c.require(dom && dom->strategy.w[1] == 1.0, "defection dominant in the PD");
              const ExampleOutcome pd = runExample(exampleByName("pd_defect"));
              c.require(pd.pass && pd.report && pd.report->guardViolations.empty(), "PD passes the guard");

              // Nesting on 50 configurations: odd draws are random blind or
              // piecewise beliefs with consistent strategies (mostly not
              // equilibria), even draws are constructions at random targets
              // (mostly equilibria). Each is checked under all three claims
              // with a reduced family.
              std::mt19937_64 rng(20240611);
              std::uniform_real_distribution<double> U(0.0, 1.0);
              const IntervalGame games[] = {cournotGame(), cournotCapacityGame(), hotellingGame()};
              DeviationFamily fam;
              fam.blindGrid = 21;
              fam.piecewiseSamples = 8;
              int violations = 0, strongHolds = 0, weakFails = 0;
              for (int k = 0; k < 50; ++k) {
                const IntervalGame& g = games[k % 3];
                Configuration conf;
                if (k % 2 == 0 && k % 3 == 0) {
                  // Cournot has negative externalities; use the leader constructions.
                  conf = forgeStackelbergPartial(g, (k / 6) % 2, 0.2 + 0.8 * U(rng)).config;
                } else if (k % 2 == 0) {
                  Profile t;
                  do {
                    t = {Strategy(g.lo[0] + g.width(0) * U(rng)), Strategy(g.lo[1] + g.width(1) * U(rng))};
                  } while (membershipTest(g, t).status != Verdict::MemberSufficient);
                  conf = forgeMonotone(g, t).config;
                } else {
                  std::array<double, 2> y{};
                  for (int i = 0; i < 2; ++i) {
                    const int j = other(i);
                    y[i] = g.lo[j] + g.width(j) * U(rng);
                    conf.strategies[i] = Strategy(bestReplyInterval(g, i, y[i]).arg.mid());
                  }
                  for (int i = 0; i < 2; ++i) {
                    const int j = other(i);
                    const double sj = conf.strategies[j].x;
                    if (U(rng) < 0.5 || sj <= g.lo[j] + 1e-6 || sj >= g.hi[j] - 1e-6) {
                      conf.beliefs[i] = BiasedBelief::blind(Strategy(y[i]));
                    } else {
                      const double a = g.lo[j] + (y[i] - g.lo[j]) * U(rng), b = y[i] + (g.hi[j] - y[i]) * U(rng);
                      conf.beliefs[i] = BiasedBelief::piecewise({{g.lo[j], a}, {sj, y[i]}, {g.hi[j], b}});
                    }
                  }
                }
                const bool s = verify(g, conf, Claim::Strong, fam).holds;
                const bool b = verify(g, conf, Claim::Bbe, fam).holds;
                const bool w = verify(g, conf, Claim::Weak, fam).holds;
                if ((s && !b) || (b && !w)) ++violations;
                strongHolds += s ? 1 : 0;
                weakFails += w ? 0 : 1;
              }
              c.require(violations == 0, std::to_string(violations) + " nesting violations");
              c.require(strongHolds > 0 && weakFails > 0, "random sample exercises both verdicts (strong holds " +
                                                              std::to_string(strongHolds) + ", weak fails " +
                                                              std::to_string(weakFails) + ")");

              for (const auto& e : std::filesystem::directory_iterator(std::string(BBE_DATA_DIR) + "/games")) {
                const Game g = loadGame(e.path().string());
                for (int i = 0; i < 2; ++i)
                  c.require(biasedBeliefMinmax(g, i).value >= undominatedMinmax(g, i).value - 1e-9,
                            "Mtilde >= M^U on " + e.path().filename().string());
              }

              int mismatches = 0;
              for (const Game& g : {Game(cournotCapacityGame()), Game(hotellingGame())}) {
                const MembershipContext ctx = membershipContext(g, 200);
                const RegionRaster r = rasterizeRegion(ctx);
                std::uniform_int_distribution<int> cell(0, 199);
                for (int k = 0; k < 500; ++k) {
                  const int a = cell(rng), b = cell(rng);
                  if (membershipTest(ctx, ctx.cellCenter(0, a), ctx.cellCenter(1, b)).status != r.at(a, b).status)
                    ++mismatches;
                }
              }
              c.require(mismatches == 0, std::to_string(mismatches) + " raster/pointwise mismatches in 1000 cells");
            });

  criterion(8, "Folk: interval construction verifies strong, finite construction refuses the no-folk game", 60.0, [](Check& c) {
    const Game g = cournotCapacityGame();
    const Forged f = forgeFolkInterval(g, {Strategy(0.75), Strategy(0.75)});
    const auto& pp = *f.punishment;
    for (int i = 0; i < 2; ++i) {
      c.require(pp.epsilon > 0 && pp.epsilon <= pp.D[i] / pp.K[i], "epsilon within D/K");
      c.require(pp.K[i] >= lipschitzBound(asInterval(g), i, i), "K bounds the own-strategy slope");
    }
    VerifyOptions opt;
    opt.allowNonMonotone = true;
    const auto rep = verify(g, f.config, Claim::Strong, {}, opt);
    c.require(rep.holds, "verify(strong) on the folk configuration");
    c.near(rep.incumbentPayoff[0], 0.125, 1e-9, "folk payoff");

    bool refused = false;
    try {
      forgeFolkFinite(noFolkGame(), {Strategy::pure(3, 0), Strategy::pure(3, 0)});
    } catch (const PreconditionError&) {
      refused = true;
    }
    c.require(refused, "no-folk game refuses (a,a)");
  });

  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
