#include <doctest.h>

#include "bbe/library.hpp"
#include "bbe/lp.hpp"
#include "oracle.hpp"

using namespace bbe;

namespace {

bool hasProfile(const EquilibriumSet& s, double a, double b, double tol) {
  for (const auto& p : s.profiles)
    if (std::abs(p[0].x - a) <= tol && std::abs(p[1].x - b) <= tol) return true;
  return false;
}

}  // namespace

TEST_CASE("interval best replies match the dense-scan oracle") {
  const IntervalGame c = cournotGame(), k = cournotCapacityGame(), h = hotellingGame();
  for (double y : {0.0, 0.2, 0.5, 0.9, 1.0}) {
    CAPTURE(y);
    CHECK(bestReplyInterval(c, 0, y).arg.mid() == doctest::Approx(oracle::cournot::br(y)).epsilon(1e-6));
    CHECK(bestReplyInterval(k, 1, y).arg.mid() == doctest::Approx(oracle::capacity::br(y)).epsilon(1e-6));
    const double hy = 3 * y;
    const double o = oracle::argmax([&](double x) { return oracle::hotelling::u(x, hy); }, 0, 3);
    CHECK(bestReplyInterval(h, 0, hy).arg.mid() == doctest::Approx(o).epsilon(1e-5));
  }
}

TEST_CASE("Nash equilibria of the interval examples") {
  const Game c = cournotGame(), k = cournotCapacityGame(), h = hotellingGame();
  const auto nc = nashEquilibria(c);
  REQUIRE(nc.profiles.size() == 1);
  CHECK(hasProfile(nc, oracle::cournot::nash, oracle::cournot::nash, 1e-6));
  CHECK(payoff(c, 0, nc.profiles[0][0], nc.profiles[0][1]) == doctest::Approx(1.0 / 9).epsilon(1e-6));
  CHECK(hasProfile(nashEquilibria(k), oracle::capacity::nash, oracle::capacity::nash, 1e-6));
  const auto nh = nashEquilibria(h);
  REQUIRE(nh.profiles.size() == 1);
  CHECK(hasProfile(nh, 1, 1, 1e-6));
  CHECK(payoff(h, 0, nh.profiles[0][0], nh.profiles[0][1]) == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("undominated sets and undominated minmax") {
  const Game k = cournotCapacityGame(), h = hotellingGame(), c = cournotGame();
  const double step = 1.0 / kDefaultGrid;
  auto uk = undominatedSet(k, 0);
  CHECK(uk.lo() == doctest::Approx(0.5).epsilon(step));
  CHECK(uk.hi() == doctest::Approx(1.0).epsilon(step));
  CHECK(undominatedMinmax(k, 0).value == doctest::Approx(oracle::capacity::undominatedMinmax).epsilon(1e-4));

  auto uh = undominatedSet(h, 1);
  CHECK(uh.lo() == doctest::Approx(0.5).epsilon(3 * step));
  CHECK(uh.hi() == doctest::Approx(2.0).epsilon(3 * step));
  // Hotelling best reply (y+1)/2 earns (y+1)^2/8, smallest at y = 1/2.
  CHECK(undominatedMinmax(h, 0).value == doctest::Approx(9.0 / 32).epsilon(1e-4));

  // Cournot: best replies to [0, 1] cover [0, 1/2]; the worst is opp = 1/2.
  auto uc = undominatedSet(c, 0);
  CHECK(uc.hi() == doctest::Approx(0.5).epsilon(step));
  CHECK(undominatedMinmax(c, 0).value == doctest::Approx(1.0 / 16).epsilon(1e-4));
}

TEST_CASE("biased-belief minmax dominates the undominated minmax") {
  for (const Game& g : {Game(cournotGame()), Game(cournotCapacityGame()), Game(hotellingGame()),
                        Game(matchingPenniesGame()), Game(rpsGame()), Game(noFolkGame())})
    for (int i = 0; i < 2; ++i) {
      CAPTURE(gameName(g));
      CHECK(biasedBeliefMinmax(g, i).value >= undominatedMinmax(g, i).value - 1e-9);
    }
  // No-folk game: the guarantee is 1.1 from action c against a.
  CHECK(undominatedMinmax(Game(noFolkGame()), 0).value == doctest::Approx(1.1));
}

TEST_CASE("Stackelberg outcomes") {
  const auto st = stackelberg(cournotGame(), 0);
  CHECK(st.leader.x == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(st.follower.x == doctest::Approx(0.25).epsilon(1e-4));
  CHECK(st.payoff == doctest::Approx(0.125).epsilon(1e-4));
  // Oracle: leader maximises u(s, BR(s)).
  const double lead = oracle::argmax([](double s) { return oracle::cournot::u(s, oracle::cournot::br(s)); }, 0, 1);
  CHECK(st.leader.x == doctest::Approx(lead).epsilon(1e-4));

  const auto sh = stackelberg(hotellingGame(), 1);
  const double hl = oracle::argmax([](double s) { return oracle::hotelling::u(s, oracle::hotelling::br(s)); }, 0, 3);
  CHECK(sh.leader.x == doctest::Approx(hl).epsilon(1e-3));
}

TEST_CASE("biased Cournot game with a blind-zero player") {
  BiasedGame bg{nullptr, {BiasedBelief::blind(Strategy(0.0)), BiasedBelief::identity()}};
  const Game c = cournotGame();
  bg.base = &c;
  const auto eq = nashOfBiasedGame(bg);
  REQUIRE(eq.profiles.size() == 1);
  const auto o = oracle::cournot::blindDeviation(0.0);
  CHECK(eq.profiles[0][0].x == doctest::Approx(o[0]).epsilon(1e-4));
  CHECK(eq.profiles[0][1].x == doctest::Approx(o[1]).epsilon(1e-4));
  CHECK(payoff(c, 0, eq.profiles[0][0], eq.profiles[0][1]) == doctest::Approx(0.125).epsilon(1e-4));
}

TEST_CASE("finite equilibria") {
  const Game mp = matchingPenniesGame();
  const auto e = nashEquilibria(mp);
  REQUIRE(e.profiles.size() == 1);
  const oracle::Mat A{{4, -1}, {2, 1}}, B{{2, 4}, {1, -1}};
  CHECK(e.profiles[0][0].w[0] == doctest::Approx(oracle::mixedRow(B)));
  CHECK(e.profiles[0][1].w[0] == doctest::Approx(oracle::mixedCol(A)));

  const auto r = nashEquilibria(rpsGame());
  REQUIRE(r.profiles.size() == 1);
  CHECK(r.profiles[0][0].w.isApprox(Strategy::uniform(3).w, 1e-9));

  const auto pd = nashEquilibria(prisonersDilemmaGame());
  REQUIRE(pd.profiles.size() == 1);
  CHECK(pd.profiles[0][0].w[1] == doctest::Approx(1.0));

  const auto sh = nashEquilibria(stagHuntGame(0.5, 0.5, 0.5, 0.5));
  CHECK(sh.profiles.size() == 3);
}

TEST_CASE("support witnesses") {
  const FiniteGame g = noFolkGame();
  // Player 1 cannot make a, b and c simultaneously best replies.
  CHECK_FALSE(supportWitness(g.own(0), {0, 1, 2}).has_value());
  const auto w = supportWitness(g.own(0), {1, 2});
  REQUIRE(w.has_value());
  const Eigen::VectorXd v = g.own(0) * *w;
  CHECK(v[1] == doctest::Approx(v[2]));
  CHECK(v[1] >= v[0] - 1e-9);
  bool exhaustive = false;
  CHECK(candidateSupports(3, &exhaustive).size() == 7);
  CHECK(exhaustive);
}

TEST_CASE("plausibility filter marks the unperturbed reply") {
  // After a blind deviation by player 1 in matching pennies, player 2 with a
  // blind belief keeps its strategy; the filter must keep that profile.
  const Game mp = toIntervalForm(matchingPenniesGame());
  Configuration c;
  c.beliefs = {BiasedBelief::blind(Strategy(0.5)), BiasedBelief::blind(Strategy(0.5))};
  c.strategies = {Strategy(0.3), Strategy(0.7)};
  const auto dr = evaluateDeviation(mp, c, 1, BiasedBelief::blind(Strategy(0.0)));
  int plausible = 0;
  for (size_t k = 0; k < dr.equilibria.profiles.size(); ++k) plausible += dr.equilibria.plausible[k] ? 1 : 0;
  CHECK(plausible >= 1);
  CHECK(plausible < static_cast<int>(dr.equilibria.profiles.size()));
}

TEST_CASE("lattice Nash scan: serial and parallel agree") {
  const IntervalGame k = cournotCapacityGame();
  const auto a = bruteForceNash(k, 120, 1e-9, Exec::Serial);
  const auto b = bruteForceNash(k, 120, 1e-9, Exec::Parallel);
  CHECK(a == b);
  REQUIRE_FALSE(a.empty());
  bool near = false;
  for (const auto& p : a) near = near || (std::abs(p[0] - 2.0 / 3) < 0.01 && std::abs(p[1] - 2.0 / 3) < 0.01);
  CHECK(near);
}

TEST_CASE("small linear programs") {
  // max x + y s.t. x + 2y <= 4, 3x + y <= 6
  Eigen::VectorXd c(2);
  c << 1, 1;
  Eigen::MatrixXd A(2, 2);
  A << 1, 2, 3, 1;
  Eigen::VectorXd b(2);
  b << 4, 6;
  const auto r = solveLP(c, A, b, Eigen::MatrixXd(0, 2), Eigen::VectorXd(0));
  REQUIRE(r.optimal());
  CHECK(r.value == doctest::Approx(2.8));
  // x + y = 1 with x, y >= 0 and x >= 2 is infeasible.
  Eigen::MatrixXd Aeq(1, 2);
  Aeq << 1, 1;
  Eigen::VectorXd beq(1);
  beq << 1;
  Eigen::MatrixXd Aub(1, 2);
  Aub << -1, 0;
  Eigen::VectorXd bub(1);
  bub << -2;
  CHECK(solveLP(c, Aub, bub, Aeq, beq).status == LPResult::Status::Infeasible);
  Eigen::MatrixXd none(0, 2);
  CHECK(solveLP(c, none, Eigen::VectorXd(0), Eigen::MatrixXd(0, 2), Eigen::VectorXd(0)).status ==
        LPResult::Status::Unbounded);
}
