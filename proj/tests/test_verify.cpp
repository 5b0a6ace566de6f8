#include <doctest.h>

#include "enum_check.hpp"

#include "bbe/library.hpp"
#include "oracle.hpp"

using namespace bbe;

namespace {

DeviationFamily quick() {
  DeviationFamily f;
  f.blindGrid = 21;
  f.piecewiseSamples = 8;
  f.simplexResolution = 4;
  return f;
}

Configuration config(BiasedBelief a, BiasedBelief b, Profile s) {
  Configuration c;
  c.beliefs = {std::move(a), std::move(b)};
  c.strategies = std::move(s);
  return c;
}

}  // namespace

TEST_CASE("claim names round-trip") {
  for (Claim c : {Claim::Weak, Claim::Bbe, Claim::Strong}) CHECK_ENUM(parseClaim(toString(c)), c);
  CHECK_THROWS_AS(parseClaim("sometimes"), ValidationError);
}

TEST_CASE("undistorted Cournot is refuted by a blind-zero deviation") {
  const Game c = cournotGame();
  const auto conf = config(BiasedBelief::identity(), BiasedBelief::identity(), {Strategy(1.0 / 3), Strategy(1.0 / 3)});
  const auto rep = verify(c, conf, Claim::Weak, quick());
  REQUIRE_FALSE(rep.holds);
  REQUIRE(rep.counterexample);
  const auto& cx = *rep.counterexample;
  CHECK(cx.belief.isBlind());
  CHECK(cx.belief.target.x == 0.0);
  const auto o = oracle::cournot::blindDeviation(0.0);
  const int d = cx.deviator, j = other(d);
  CHECK(cx.equilibrium[d].x == doctest::Approx(o[0]).epsilon(1e-4));
  CHECK(cx.equilibrium[j].x == doctest::Approx(o[1]).epsilon(1e-4));
  CHECK(cx.deviatorPayoff == doctest::Approx(0.125).epsilon(1e-4));
  CHECK(cx.incumbentPayoff == doctest::Approx(1.0 / 9).epsilon(1e-6));
  CHECK(cx.gain > 1e-6);
  CHECK(rep.caveat.find("refuted") != std::string::npos);
}

TEST_CASE("stubborn leader configuration verifies strong") {
  const Game c = cournotGame();
  const auto conf =
      config(BiasedBelief::blind(Strategy(0.0)), BiasedBelief::identity(), {Strategy(0.5), Strategy(0.25)});
  const auto rep = verify(c, conf, Claim::Strong, quick());
  CHECK(rep.holds);
  CHECK(rep.incumbentPayoff[0] == doctest::Approx(0.125));
  CHECK(rep.incumbentPayoff[1] == doctest::Approx(0.0625));
  CHECK(rep.caveat.find("holds_on_family") != std::string::npos);
  CHECK(rep.deviationsTried == static_cast<int>(familyBeliefs(c, 0, quick()).size() + familyBeliefs(c, 1, quick()).size()));
}

TEST_CASE("serial and parallel verification agree") {
  const Game k = cournotCapacityGame();
  const Forged f = forgeSubstitutes(k, {Strategy(0.7), Strategy(0.6)});
  VerifyOptions s, p;
  s.exec = Exec::Serial;
  p.exec = Exec::Parallel;
  const auto a = verify(k, f.config, Claim::Bbe, quick(), s), b = verify(k, f.config, Claim::Bbe, quick(), p);
  CHECK(a.holds == b.holds);
  REQUIRE(a.outcomes.size() == b.outcomes.size());
  for (size_t i = 0; i < a.outcomes.size(); ++i) {
    CHECK(a.outcomes[i].minGain == b.outcomes[i].minGain);
    CHECK(a.outcomes[i].equilibria == b.outcomes[i].equilibria);
  }
}

TEST_CASE("non-monotone incumbents need the override for bbe and strong claims") {
  const auto e = exampleByName("pd_withdrawal");
  const Configuration conf = e.build(*e.game);
  CHECK_THROWS_AS(verify(*e.game, conf, Claim::Strong, quick()), PreconditionError);
  CHECK_THROWS_AS(verify(*e.game, conf, Claim::Bbe, quick()), PreconditionError);
  CHECK_NOTHROW(verify(*e.game, conf, Claim::Weak, quick()));
  VerifyOptions o;
  o.allowNonMonotone = true;
  const auto rep = verify(*e.game, conf, Claim::Strong, quick(), o);
  CHECK(rep.holds);
  CHECK(rep.incumbentPayoff[0] == 10.0);
}

TEST_CASE("configurations that are not equilibria of their biased game are rejected") {
  const Game c = cournotGame();
  const auto bad = config(BiasedBelief::identity(), BiasedBelief::identity(), {Strategy(0.5), Strategy(0.25)});
  CHECK_THROWS_AS(verify(c, bad, Claim::Weak, quick()), ValidationError);
}

TEST_CASE("deviation family composition") {
  const Game c = cournotGame(), r = rpsGame();
  DeviationFamily f = quick();
  const auto a = familyBeliefs(c, 0, f);
  CHECK_ENUM(a.front().kind, BeliefKind::Identity);
  CHECK(a[1].target.x == 0.0);
  CHECK(a[21].target.x == 1.0);
  CHECK(a.size() <= 1u + 21u + 8u);
  CHECK(familyBeliefs(c, 0, f).back() == a.back());  // deterministic
  f.seed += 1;
  CHECK_FALSE(familyBeliefs(c, 0, f).back() == a.back());

  // Three actions at resolution 4: 15 barycentric points plus random matrices.
  const auto b = familyBeliefs(r, 1, quick());
  CHECK(b.size() == 1u + 15u + 8u);
  for (const auto& x : b) CHECK_NOTHROW(validateBelief(r, 1, x));

  DeviationFamily bad = quick();
  bad.custom.push_back(BiasedBelief::blind(Strategy(2.0)));
  CHECK_THROWS(familyBeliefs(c, 0, bad));
}

TEST_CASE("restricted game at p = 1 is the biased game") {
  const Game c = cournotGame();
  const auto dev = BiasedBelief::blind(Strategy(0.2));
  const auto inc = BiasedBelief::identity();
  const Profile target{Strategy(1.0 / 3), Strategy(1.0 / 3)};
  const PerceivedGame full = restrictedBiasedGame(c, 0, dev, inc, target, 1.0);
  BiasedGame bg{&c, {dev, inc}};
  const PerceivedGame ref = perceivedGame(bg);
  for (double x : {0.1, 0.5})
    for (double y : {0.2, 0.9}) {
      CHECK(full.f[0](x, y) == doctest::Approx(ref.f[0](x, y)));
      CHECK(full.f[1](y, x) == doctest::Approx(ref.f[1](y, x)));
    }
}

TEST_CASE("restricted game mixes observed and unobserved play") {
  const Game c = cournotGame();
  const double p = 0.3, sj = 1.0 / 3;
  const Profile target{Strategy(sj), Strategy(sj)};
  const PerceivedGame pg =
      restrictedBiasedGame(c, 0, BiasedBelief::identity(), BiasedBelief::identity(), target, p);
  const double own = 0.4, opp = 0.2;
  // Deviator: p u(own, opp) + (1-p) u(own, s_j*).
  CHECK(pg.f[0](own, opp) ==
        doctest::Approx(p * oracle::cournot::u(own, opp) + (1 - p) * oracle::cournot::u(own, sj)));
  // Non-deviator: p u(own, psi(s_i')) + (1-p) u(s_j*, psi(s_i')).
  CHECK(pg.f[1](opp, own) ==
        doctest::Approx(p * oracle::cournot::u(opp, own) + (1 - p) * oracle::cournot::u(sj, own)));
  const Profile eq{Strategy(own), Strategy(opp)};
  CHECK(realizedPayoff(c, 0, eq, target, p) ==
        doctest::Approx(p * oracle::cournot::u(own, opp) + (1 - p) * oracle::cournot::u(own, sj)));
}

TEST_CASE("p-observability verification of the leader construction") {
  const Game c = cournotGame();
  const Forged f = forgeStackelbergPartial(c, 0, 0.5);
  const auto rep = verifyP(c, f.config, Claim::Strong, quick(), 0.5);
  CHECK(rep.holds);
  REQUIRE(rep.p);
  CHECK(*rep.p == 0.5);
  CHECK(rep.incumbentPayoff[0] ==
        doctest::Approx(oracle::cournot::u(oracle::cournot::pLeader(0.5), oracle::cournot::pFollower(0.5))));
  const auto id = config(BiasedBelief::identity(), BiasedBelief::identity(), {Strategy(1.0 / 3), Strategy(1.0 / 3)});
  CHECK_FALSE(verifyP(c, id, Claim::Weak, quick(), 0.3).holds);
}

TEST_CASE("rock-paper-scissors: bbe holds via plausibility, strong fails") {
  const Game r = rpsGame();
  const auto conf = config(BiasedBelief::identity(), BiasedBelief::blind(Strategy::uniform(3)),
                           {Strategy::pure(3, 0), Strategy::uniform(3)});
  const auto bbe = verify(r, conf, Claim::Bbe, quick());
  CHECK(bbe.holds);
  CHECK(bbe.guardViolations.empty());
  CHECK(bbe.incumbentPayoff[0] == doctest::Approx(0.0));
  const auto strong = verify(r, conf, Claim::Strong, quick());
  REQUIRE_FALSE(strong.holds);
  CHECK(strong.counterexample->gain == doctest::Approx(1.0));
}

TEST_CASE("matching pennies: profiles outside both classes") {
  const Game mp = toIntervalForm(matchingPenniesGame());
  const auto half = BiasedBelief::blind(Strategy(0.5));
  const auto p33 = config(half, half, {Strategy(0.3), Strategy(0.3)});
  CHECK_FALSE(verify(mp, p33, Claim::Weak, quick()).holds);
  const auto p37 = config(half, half, {Strategy(0.3), Strategy(0.7)});
  const auto rep = verify(mp, p37, Claim::Bbe, quick());
  CHECK_FALSE(rep.holds);
  // Player 1's indifference keeps the deviator's favourable profile among
  // the unfiltered equilibria.
  CHECK(rep.unfilteredHolds);
  CHECK(rep.caveat.find("plausibility") != std::string::npos);
}

TEST_CASE("evaluateDeviation reports gains parallel to equilibria") {
  const Game c = cournotGame();
  const auto conf = config(BiasedBelief::identity(), BiasedBelief::identity(), {Strategy(1.0 / 3), Strategy(1.0 / 3)});
  const auto r = evaluateDeviation(c, conf, 1, BiasedBelief::blind(Strategy(0.0)));
  REQUIRE(r.gains.size() == r.equilibria.profiles.size());
  REQUIRE(r.gains.size() == 1);
  CHECK(r.gains[0] == doctest::Approx(0.125 - 1.0 / 9).epsilon(1e-4));
}
