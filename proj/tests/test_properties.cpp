#include <doctest.h>

#include "enum_check.hpp"

#include <filesystem>
#include <random>

#include "bbe/io.hpp"
#include "bbe/library.hpp"
#include "oracle.hpp"

using namespace bbe;

namespace {

DeviationFamily small() {
  DeviationFamily f;
  f.blindGrid = 11;
  f.piecewiseSamples = 4;
  f.simplexResolution = 4;
  return f;
}

// Random configuration: each player best-replies to a random perceived
// opponent strategy, held either blindly or through a monotone piecewise
// belief passing through the actual opponent strategy.
Configuration randomConfig(const IntervalGame& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  Configuration c;
  std::array<double, 2> y{};
  for (int i = 0; i < 2; ++i) {
    const int j = other(i);
    y[i] = g.lo[j] + g.width(j) * U(rng);
    c.strategies[i] = Strategy(bestReplyInterval(g, i, y[i]).arg.mid());
  }
  for (int i = 0; i < 2; ++i) {
    const int j = other(i);
    const double sj = c.strategies[j].x;
    if (U(rng) < 0.5 || sj <= g.lo[j] + 1e-6 || sj >= g.hi[j] - 1e-6) {
      c.beliefs[i] = BiasedBelief::blind(Strategy(y[i]));
    } else {
      const double a = g.lo[j] + (y[i] - g.lo[j]) * U(rng), b = y[i] + (g.hi[j] - y[i]) * U(rng);
      c.beliefs[i] = BiasedBelief::piecewise({{g.lo[j], a}, {sj, y[i]}, {g.hi[j], b}});
    }
  }
  return c;
}

// Random expression tree over s1, s2 and small constants.
std::string randomExpr(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth > 0 ? 9 : 2);
  switch (pick(rng)) {
    case 0: return "s1";
    case 1: return "s2";
    case 2: return std::to_string(std::uniform_int_distribution<int>(0, 9)(rng)) + ".5";
    case 3: return "(" + randomExpr(rng, depth - 1) + "+" + randomExpr(rng, depth - 1) + ")";
    case 4: return "(" + randomExpr(rng, depth - 1) + "-" + randomExpr(rng, depth - 1) + ")";
    case 5: return randomExpr(rng, depth - 1) + "*" + randomExpr(rng, depth - 1);
    case 6: return "min(" + randomExpr(rng, depth - 1) + ", " + randomExpr(rng, depth - 1) + ")";
    case 7: return "max(" + randomExpr(rng, depth - 1) + ", " + randomExpr(rng, depth - 1) + ")";
    case 8: return "-" + randomExpr(rng, depth - 1);
    default: return "(" + randomExpr(rng, depth - 1) + ")^2";
  }
}

}  // namespace

TEST_CASE("property: print/parse round trip on random expressions") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 200; ++k) {
    const std::string src = randomExpr(rng, 4);
    CAPTURE(src);
    const Expr a = parseExpr(src);
    const Expr b = parseExpr(a.print());
    CHECK(a == b);
    CHECK(b(0.3, 0.8) == a(0.3, 0.8));
  }
}

TEST_CASE("property: claim nesting strong => bbe => weak") {
  std::mt19937_64 rng(5);
  const IntervalGame games[] = {cournotGame(), cournotCapacityGame(), hotellingGame()};
  VerifyOptions opt;
  opt.exec = Exec::Serial;
  for (int k = 0; k < 9; ++k) {
    const IntervalGame& g = games[k % 3];
    const Configuration c = randomConfig(g, rng);
    CAPTURE(g.name);
    CAPTURE(describe(c.beliefs[0]));
    CAPTURE(describe(c.beliefs[1]));
    const bool strong = verify(g, c, Claim::Strong, small(), opt).holds;
    const bool bbe = verify(g, c, Claim::Bbe, small(), opt).holds;
    const bool weak = verify(g, c, Claim::Weak, small(), opt).holds;
    CHECK((!strong || bbe));
    CHECK((!bbe || weak));
  }
}

TEST_CASE("property: biased-belief minmax is at least the undominated minmax on every shipped game") {
  for (const auto& entry : std::filesystem::directory_iterator(std::string(BBE_DATA_DIR) + "/games")) {
    const Game g = loadGame(entry.path().string());
    for (int i = 0; i < 2; ++i) {
      CAPTURE(entry.path().string());
      CHECK(biasedBeliefMinmax(g, i).value >= undominatedMinmax(g, i).value - 1e-9);
    }
  }
}

TEST_CASE("property: raster verdicts equal pointwise verdicts at random cells") {
  std::mt19937_64 rng(3);
  for (const Game& g : {Game(cournotCapacityGame()), Game(hotellingGame())}) {
    const MembershipContext ctx = membershipContext(g, 50);
    const RegionRaster r = rasterizeRegion(ctx);
    std::uniform_int_distribution<int> cell(0, 49);
    for (int k = 0; k < 200; ++k) {
      const int a = cell(rng), b = cell(rng);
      const auto v = membershipTest(ctx, ctx.cellCenter(0, a), ctx.cellCenter(1, b));
      CHECK_ENUM(v.status, r.at(a, b).status);
      CHECK(v.sufficient == r.at(a, b).sufficient);
    }
  }
}

TEST_CASE("property: membership verdict invariants") {
  const MembershipContext ctx = membershipContext(cournotCapacityGame(), 40);
  const RegionRaster r = rasterizeRegion(ctx);
  for (const auto& v : r.cells) {
    if (v.status == Verdict::NonMember) CHECK_FALSE(v.failed.empty());
    if (v.status == Verdict::MemberSufficient)
      for (int i = 0; i < 2; ++i) {
        CHECK(v.sufficient[i] > 0);
        CHECK(v.undominated[i] > 0);
        CHECK(v.investment[i] > 0);
      }
  }
}

TEST_CASE("property: a strictly dominant strategy pins weak outcomes to Nash") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> U(-1.0, 1.0), P(0.0, 1.0);
  VerifyOptions opt;
  opt.exec = Exec::Serial;
  int checked = 0;
  for (int k = 0; k < 12; ++k) {
    Eigen::Matrix2d a, b;
    a << U(rng), U(rng), 0, 0;
    a.row(1) = a.row(0).array() + 0.1 + P(rng);  // second action strictly dominant for player 1
    b << U(rng), U(rng), U(rng), U(rng);
    const FiniteGame g = makeFiniteGame("dom", {{{"x", "y"}, {"x", "y"}}}, a, b);
    REQUIRE(dominantStrategyCheck(g));
    // Player 2 best-replies to a random perceived mix.
    const double q = P(rng);
    const Eigen::Vector2d perceived(q, 1 - q);
    const auto br = pureBestReplies(g.own(1), perceived);
    Configuration c;
    c.strategies = {Strategy::pure(2, 1), Strategy::pure(2, br[0])};
    c.beliefs = {BiasedBelief::blind(Strategy::pure(2, br[0])), BiasedBelief::blind(Strategy(Eigen::VectorXd(perceived)))};
    const Game view = g;
    const auto rep = verify(view, c, Claim::Weak, small(), opt);
    CHECK(rep.guardViolations.empty());
    if (rep.holds) {
      CHECK(isPerceivedEquilibrium(perceivedGame(view), c.strategies));
      ++checked;
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("property: zero-sum weak outcomes pay the value") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  for (int k = 0; k < 6; ++k) {
    Eigen::Matrix3d a;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) a(r, c) = U(rng);
    const Game g = makeFiniteGame("zs", {{{"a", "b", "c"}, {"a", "b", "c"}}}, a, -a);
    const auto zs = zeroSumCheck(g);
    REQUIRE(zs.isZeroSum);
    const auto nash = nashEquilibria(g);
    REQUIRE_FALSE(nash.profiles.empty());
    const auto conf = nashAsBBE(g, nash.profiles[0]).config;
    const auto rep = verify(g, conf, Claim::Weak, small());
    CHECK(rep.holds);
    CHECK(rep.guardViolations.empty());
    CHECK(rep.incumbentPayoff[0] == doctest::Approx(zs.value1).epsilon(1e-6));
  }
}

TEST_CASE("property: symmetric games give symmetric rasters") {
  const RegionRaster r = rasterizeRegion(hotellingGame(), 30);
  for (int a = 0; a < 30; ++a)
    for (int b = 0; b < a; ++b) CHECK_ENUM(r.at(a, b).status, r.at(b, a).status);
}

TEST_CASE("property: p-observability leader payoffs are monotone in p") {
  const Game c = cournotGame();
  double prev1 = -INFINITY, prev2 = INFINITY;
  for (double p : {0.0, 0.2, 0.4, 0.6, 0.8, 1.0}) {
    const Forged f = forgeStackelbergPartial(c, 0, p);
    const double u1 = payoff(c, 0, f.config.strategies[0], f.config.strategies[1]);
    const double u2 = payoff(c, 1, f.config.strategies[1], f.config.strategies[0]);
    CHECK(u1 > prev1);
    CHECK(u2 < prev2);
    prev1 = u1;
    prev2 = u2;
  }
}
