#include <doctest.h>

#include "enum_check.hpp"

#include "bbe/library.hpp"
#include "oracle.hpp"

using namespace bbe;

namespace {

// Small family for unit tests; the acceptance run uses the default one.
DeviationFamily quick() {
  DeviationFamily f;
  f.blindGrid = 21;
  f.piecewiseSamples = 8;
  f.simplexResolution = 4;
  return f;
}

VerifyOptions serial() {
  VerifyOptions o;
  o.exec = Exec::Serial;
  return o;
}

}  // namespace

TEST_CASE("complements construction for Hotelling (2,2)") {
  const Game h = hotellingGame();
  const Forged f = forgeComplements(h, {Strategy(2.0), Strategy(2.0)});
  CHECK(f.monotone);
  CHECK(f.thresholds.size() == 2);
  CHECK_NOTHROW(checkConfiguration(h, f.config));
  for (int i = 0; i < 2; ++i) {
    CHECK(isMonotone(f.config.beliefs[i], h, i));
    CHECK(f.config.beliefs[i](2.0) > 2.0);  // wishful at the target
  }
  const auto rep = verify(h, f.config, f.strongClaim ? Claim::Strong : Claim::Bbe, quick(), serial());
  CHECK(rep.holds);
}

TEST_CASE("substitutes construction and its refusals") {
  const Game k = cournotCapacityGame();
  const Forged f = forgeSubstitutes(k, {Strategy(0.7), Strategy(0.6)});
  CHECK(f.monotone);
  CHECK(verify(k, f.config, Claim::Bbe, quick(), serial()).holds);

  try {
    forgeSubstitutes(k, {Strategy(0.75), Strategy(0.75)});
    FAIL("expected a refusal");
  } catch (const PreconditionError& e) {
    CHECK(std::string(e.what()).find("investment") != std::string::npos);
  }
  CHECK_THROWS_AS(forgeComplements(k, {Strategy(0.7), Strategy(0.6)}), UnsupportedError);
  CHECK_THROWS_AS(forgeSubstitutes(cournotGame(), {Strategy(0.4), Strategy(0.4)}), UnsupportedError);
}

TEST_CASE("monotone dispatch matches the class-specific construction") {
  const Game k = cournotCapacityGame();
  const Forged a = forgeMonotone(k, {Strategy(0.7), Strategy(0.6)});
  const Forged b = forgeSubstitutes(k, {Strategy(0.7), Strategy(0.6)});
  CHECK(a.config.beliefs[0] == b.config.beliefs[0]);
  CHECK(a.config.beliefs[1] == b.config.beliefs[1]);
}

TEST_CASE("opposites construction on matching pennies never claims strong") {
  const Game mp = matchingPenniesGame();  // 2x2: built on the interval form
  const Forged f = forgeOpposites(mp, {Strategy(Eigen::Vector2d(0.7, 0.3)), Strategy(Eigen::Vector2d(0.7, 0.3))});
  CHECK_FALSE(f.strongClaim);
  CHECK(f.config.strategies[0].x == doctest::Approx(0.7));
  CHECK_FALSE(f.note.empty());
  CHECK_THROWS_AS(forgeOpposites(mp, {Strategy(Eigen::Vector2d(0.3, 0.7)), Strategy(Eigen::Vector2d(0.3, 0.7))}),
                  PreconditionError);
}

TEST_CASE("stubborn Stackelberg leader") {
  const Game c = cournotGame();
  const Forged f = forgeStackelbergStubborn(c, 0);
  CHECK(f.strongClaim);
  CHECK(f.config.strategies[0].x == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(f.config.strategies[1].x == doctest::Approx(0.25).epsilon(1e-4));
  CHECK(f.config.beliefs[0].isBlind());
  // Blind target must be answered by 1/2: BR(y) = (1 - y)/2 = 1/2 forces y = 0.
  CHECK(f.config.beliefs[0].target.x == doctest::Approx(0.0).epsilon(1e-3));
  CHECK_ENUM(f.config.beliefs[1].kind, BeliefKind::Identity);

  const Forged g = forgeStackelbergStubborn(c, 1);
  CHECK(g.config.strategies[1].x == doctest::Approx(0.5).epsilon(1e-4));
}

TEST_CASE("partial-observability leader follows the closed form") {
  const Game c = cournotGame();
  for (double p : {0.0, 0.25, 0.5, 1.0}) {
    CAPTURE(p);
    const Forged f = forgeStackelbergPartial(c, 0, p);
    CHECK(f.config.strategies[0].x == doctest::Approx(oracle::cournot::pLeader(p)).epsilon(1e-5));
    CHECK(f.config.strategies[1].x == doctest::Approx(oracle::cournot::pFollower(p)).epsilon(1e-5));
  }
  CHECK_THROWS_AS(forgeStackelbergPartial(c, 0, 1.5), DomainError);
  CHECK_THROWS_AS(forgeStackelbergPartial(rpsGame(), 0, 0.5), UnsupportedError);
}

TEST_CASE("finite folk construction") {
  try {
    forgeFolkFinite(noFolkGame(), {Strategy::pure(3, 0), Strategy::pure(3, 0)});
    FAIL("expected a refusal");
  } catch (const PreconditionError& e) {
    CHECK(std::string(e.what()).find("full undominated support") != std::string::npos);
  }
  // In RPS every action is a best reply to the uniform mix.
  const Game r = rpsGame();
  const Forged f = forgeFolkFinite(r, {Strategy::pure(3, 0), Strategy::uniform(3)});
  CHECK(f.config.beliefs[0].isBlind());
  CHECK(f.config.beliefs[0].target.w.isApprox(Strategy::uniform(3).w, 1e-9));
  REQUIRE(f.punishment);
  CHECK(f.punishment->D[0] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK_THROWS_AS(forgeFolkFinite(cournotGame(), {Strategy(0.5), Strategy(0.5)}), UnsupportedError);
}

TEST_CASE("interval folk construction respects the epsilon bound") {
  const Game k = cournotCapacityGame();
  const Forged f = forgeFolkInterval(k, {Strategy(0.75), Strategy(0.75)});
  REQUIRE(f.punishment);
  const auto& pp = *f.punishment;
  for (int i = 0; i < 2; ++i) {
    CHECK(pp.D[i] == doctest::Approx(0.125 - 1.0 / 16).epsilon(1e-4));
    CHECK(pp.K[i] >= lipschitzBound(asInterval(k), i, i));
    CHECK(pp.epsilon <= pp.D[i] / pp.K[i]);
    CHECK(pp.punisher[i].x == doctest::Approx(0.5).epsilon(1e-3));
  }
  CHECK(pp.epsilon > 0);
  CHECK_FALSE(f.monotone);
  CHECK_NOTHROW(checkConfiguration(k, f.config));
  CHECK_THROWS_AS(forgeFolkInterval(hotellingGame(), {Strategy(2.0), Strategy(2.0)}), PreconditionError);
  // Below the undominated minmax there is nothing to protect.
  CHECK_THROWS_AS(forgeFolkInterval(k, {Strategy(0.55), Strategy(0.5)}), PreconditionError);
}
