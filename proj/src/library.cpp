#include "bbe/library.hpp"

#include <cmath>
#include <sstream>

namespace bbe {

IntervalGame cournotGame() {
  return makeIntervalGame("cournot", {0, 0}, {1, 1}, {"s1*(1-s1-s2)", "s2*(1-s1-s2)"});
}

IntervalGame cournotCapacityGame() {
  return makeIntervalGame("cournot_capacity", {0, 0}, {1, 1}, {"(1-s1)*(s1+s2-1)", "(1-s2)*(s1+s2-1)"});
}

IntervalGame hotellingGame(double t, double M) {
  return makeIntervalGame("hotelling", {0, 0}, {M, M},
                          {"s1*min(1, max(0, (s2-s1+t)/(2*t)))", "s2*min(1, max(0, (s1-s2+t)/(2*t)))"},
                          {{"t", t}, {"M", M}});
}

IntervalGame inputGame(double rho) {
  return makeIntervalGame("input", {0, 0}, {1, 1}, {"s1*s2 - s1^2/(2*rho)", "s1*s2 - s2^2/(2*rho)"}, {{"rho", rho}});
}

namespace {

Eigen::MatrixXd mat(int r, int c, std::initializer_list<double> v) {
  Eigen::MatrixXd m(r, c);
  auto it = v.begin();
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < c; ++b) m(a, b) = *it++;
  return m;
}

}  // namespace

FiniteGame matchingPenniesGame() {
  return makeFiniteGame("matching_pennies", {{{"h", "t"}, {"h", "t"}}}, mat(2, 2, {4, -1, 2, 1}),
                        mat(2, 2, {2, 4, 1, -1}));
}

FiniteGame rpsGame() {
  Eigen::MatrixXd a = mat(3, 3, {0, -1, 1, 1, 0, -1, -1, 1, 0});
  return makeFiniteGame("rps", {{{"R", "P", "S"}, {"R", "P", "S"}}}, a, -a);
}

FiniteGame rpsTableGame() {
  return makeFiniteGame("rps_table", {{{"R", "P", "S"}, {"R", "P", "S"}}}, mat(3, 3, {0, 0, 1, 1, 0, 0, 0, 1, 0}),
                        mat(3, 3, {0, 1, 0, 0, 0, 1, 1, 0, 0}));
}

FiniteGame pdWithdrawalGame() {
  Eigen::MatrixXd a = mat(3, 3, {10, 0, 0, 11, 1, 0, 0, 0, 0});
  return makeFiniteGame("pd_withdrawal", {{{"c", "d", "w"}, {"c", "d", "w"}}}, a, a.transpose());
}

FiniteGame prisonersDilemmaGame() {
  Eigen::MatrixXd a = mat(2, 2, {10, 0, 11, 1});
  return makeFiniteGame("prisoners_dilemma", {{{"c", "d"}, {"c", "d"}}}, a, a.transpose());
}

FiniteGame travelersDilemmaGame() {
  const int n = 100;
  std::vector<std::string> labels;
  Eigen::MatrixXd a(n, n);
  for (int x = 1; x <= n; ++x) {
    labels.push_back(std::to_string(x));
    for (int y = 1; y <= n; ++y) a(x - 1, y - 1) = x < y ? x + 2 : (x == y ? x : y - 2);
  }
  return makeFiniteGame("travelers_dilemma", {labels, labels}, a, a.transpose());
}

FiniteGame stagHuntGame(double g1, double l1, double g2, double l2) {
  return makeFiniteGame("stag_hunt", {{{"s", "h"}, {"s", "h"}}}, mat(2, 2, {1, -l1, g1, 0}),
                        mat(2, 2, {1, g2, -l2, 0}));
}

FiniteGame hawkDoveGame(double g1, double l1, double g2, double l2) {
  return makeFiniteGame("hawk_dove", {{{"d", "h"}, {"d", "h"}}}, mat(2, 2, {1, 1 - l1, 1 + g1, 0}),
                        mat(2, 2, {1, 1 + g2, 1 - l2, 0}));
}

FiniteGame noFolkGame() {
  return makeFiniteGame("no_folk", {{{"a", "b", "c"}, {"a", "b", "c"}}}, mat(3, 3, {2, 2, 1.1, 3, 3, 1, 3.1, 0, 0}),
                        mat(3, 3, {2, 3, 3, 2, 3, 0, 1, 1, 0}));
}

double stagHuntMixed(double gj, double lj) { return lj / (lj + (1.0 - gj)); }

double hawkDoveMixed(double gj, double lj) { return (1.0 - lj) / (gj + (1.0 - lj)); }

namespace {

using Builder = std::function<Configuration(const Game&)>;

Profile scalars(double a, double b) { return {Strategy(a), Strategy(b)}; }

Configuration fixed(BiasedBelief b1, BiasedBelief b2, Profile s) {
  Configuration c;
  c.beliefs = {std::move(b1), std::move(b2)};
  c.strategies = std::move(s);
  return c;
}

Builder constant(Configuration c) {
  return [c](const Game&) { return c; };
}

Builder forged(Forged (*f)(const Game&, const Profile&), Profile target) {
  return [f, target](const Game& g) { return f(g, target).config; };
}

LibraryEntry entry(std::string name, std::string summary, Game g, Builder b, Claim claim, bool holds) {
  LibraryEntry e;
  e.name = std::move(name);
  e.summary = std::move(summary);
  e.game = std::make_shared<const Game>(std::move(g));
  e.build = std::move(b);
  e.claim = claim;
  e.expectHolds = holds;
  return e;
}

// Blind beliefs at the opponent's equilibrium strategy.
Builder nashBlind(Profile s) {
  return [s](const Game& g) { return nashAsBBE(g, s).config; };
}

}  // namespace

std::vector<LibraryEntry> exampleLibrary() {
  std::vector<LibraryEntry> out;
  auto add = [&](LibraryEntry e, double u1 = NAN, double u2 = NAN) {
    e.payoff = {u1, u2};
    out.push_back(std::move(e));
  };
  const double third = 1.0 / 3.0;

  add(entry("cournot_identity", "undistorted beliefs at the Cournot equilibrium; a blind deviation gains", cournotGame(),
            constant(fixed(BiasedBelief::identity(), BiasedBelief::identity(), scalars(third, third))), Claim::Weak,
            false),
      1.0 / 9, 1.0 / 9);
  add(entry("cournot_blind", "blind beliefs at the Cournot equilibrium", cournotGame(), nashBlind(scalars(third, third)),
            Claim::Strong, true),
      1.0 / 9, 1.0 / 9);
  add(entry("cournot_stackelberg", "stubborn leader with a blind belief, undistorted follower", cournotGame(),
            [](const Game& g) { return forgeStackelbergStubborn(g, 0).config; }, Claim::Strong, true),
      1.0 / 8, 1.0 / 16);
  for (double p : {0.25, 0.5}) {
    auto e = entry("cournot_p" + std::to_string(static_cast<int>(std::lround(p * 100))),
                   "stubborn leader when the follower notices deviations with probability " + formatNumber(p),
                   cournotGame(), [p](const Game& g) { return forgeStackelbergPartial(g, 0, p).config; },
                   Claim::Strong, true);
    e.p = p;
    const double x = 1.0 / (3 - p), y = (2 - p) / (2 * (3 - p));
    add(std::move(e), x * y, y * y);
  }
  {
    auto e = entry("cournot_identity_p30", "undistorted beliefs with observation probability 0.3", cournotGame(),
                   constant(fixed(BiasedBelief::identity(), BiasedBelief::identity(), scalars(third, third))),
                   Claim::Weak, false);
    e.p = 0.3;
    add(std::move(e), 1.0 / 9, 1.0 / 9);
  }

  add(entry("capacity_nash", "blind beliefs at the capacity-game equilibrium", cournotCapacityGame(),
            nashBlind(scalars(2.0 / 3, 2.0 / 3)), Claim::Strong, true),
      1.0 / 9, 1.0 / 9);
  add(entry("capacity_substitutes", "monotone construction at an asymmetric member profile", cournotCapacityGame(),
            forged(forgeSubstitutes, scalars(0.7, 0.6)), Claim::Strong, true),
      0.09, 0.12);
  {
    auto e = entry("capacity_folk", "non-monotone construction at the Pareto point (3/4, 3/4)", cournotCapacityGame(),
                   forged(forgeFolkInterval, scalars(0.75, 0.75)), Claim::Strong, true);
    e.nonMonotone = true;
    add(std::move(e), 1.0 / 8, 1.0 / 8);
  }

  {
    auto psi = BiasedBelief::piecewise({{0, 0}, {0.5, 0}, {2, 3}, {3, 3}});
    add(entry("hotelling_22", "displayed wishful belief supporting prices (2, 2)", hotellingGame(),
              constant(fixed(psi, psi, scalars(2, 2))), Claim::Bbe, true),
        1, 1);
  }
  add(entry("hotelling_forged", "monotone construction at prices (2, 2)", hotellingGame(),
            forged(forgeComplements, scalars(2, 2)), Claim::Strong, true),
      1, 1);
  {
    const double rho = 0.9;
    auto psi = BiasedBelief::piecewise({{0, 0}, {rho, 1}, {1, 1}});
    add(entry("input_game", "wishful belief supporting efforts (rho, rho) with rho = 0.9", inputGame(rho),
              constant(fixed(psi, psi, scalars(rho, rho))), Claim::Strong, true),
        rho * rho - rho / 2, rho * rho - rho / 2);
  }

  const IntervalGame mp = toIntervalForm(matchingPenniesGame());
  add(entry("mp_class1", "both players favour heads; pessimism with one-sided blindness", mp,
            forged(forgeOpposites, scalars(0.7, 0.7)), Claim::Bbe, true));
  add(entry("mp_class2", "player 1 favours tails, player 2 plays heads", mp, forged(forgeOpposites, scalars(0.3, 1)),
            Claim::Bbe, true));
  for (auto [a, b] : {std::pair{0.3, 0.3}, std::pair{0.3, 0.7}}) {
    std::ostringstream nm;
    nm << "mp_refuted_" << std::lround(a * 10) << std::lround(b * 10);
    add(entry(nm.str(), "indifference beliefs at a profile outside both classes", mp,
              constant(fixed(BiasedBelief::blind(Strategy(0.5)), BiasedBelief::blind(Strategy(0.5)), scalars(a, b))),
              Claim::Bbe, false));
  }

  const Strategy R = Strategy::pure(3, 0), U3 = Strategy::uniform(3);
  add(entry("rps", "undistorted player 1 plays R against a blind uniform mixer", rpsGame(),
            constant(fixed(BiasedBelief::identity(), BiasedBelief::blind(U3), {R, U3})), Claim::Bbe, true),
      0, 0);
  add(entry("rps_strong", "the same configuration fails the all-equilibria test", rpsGame(),
            constant(fixed(BiasedBelief::identity(), BiasedBelief::blind(U3), {R, U3})), Claim::Strong, false),
      0, 0);
  add(entry("rps_table", "the tabulated 0/1 payoffs are not constant-sum; a stochastic deviation by player 2 pays",
            rpsTableGame(), constant(fixed(BiasedBelief::identity(), BiasedBelief::blind(U3), {R, U3})), Claim::Weak,
            false),
      third, third);

  {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(3, 3);
    m(2, 0) = 1;  // c is seen as w
    m(1, 1) = 1;
    m(2, 2) = 1;
    auto psi = BiasedBelief::stochastic(m);
    auto e = entry("pd_withdrawal", "cooperation sustained by seeing cooperation as withdrawal", pdWithdrawalGame(),
                   constant(fixed(psi, psi, {Strategy::pure(3, 0), Strategy::pure(3, 0)})), Claim::Strong, true);
    e.nonMonotone = true;
    add(std::move(e), 10, 10);
  }
  add(entry("pd_defect", "blind beliefs at mutual defection", prisonersDilemmaGame(),
            nashBlind({Strategy::pure(2, 1), Strategy::pure(2, 1)}), Claim::Strong, true),
      1, 1);
  {
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(100, 100);
    m(98, 98) = 0.5;
    m(99, 98) = 0.5;
    auto psi = BiasedBelief::stochastic(m);
    auto e = entry("travelers_dilemma", "level-1 wishful belief supporting claims (99, 99)", travelersDilemmaGame(),
                   constant(fixed(psi, psi, {Strategy::pure(100, 98), Strategy::pure(100, 98)})), Claim::Strong, true);
    e.nonMonotone = true;
    add(std::move(e), 99, 99);
  }

  const FiniteGame stag = stagHuntGame(0.5, 0.5, 0.5, 0.5);
  add(entry("stag_hunt_hare", "blind beliefs at (hare, hare)", stag,
            nashBlind({Strategy::pure(2, 1), Strategy::pure(2, 1)}), Claim::Strong, true),
      0, 0);
  add(entry("stag_hunt_stag", "blind beliefs at (stag, stag)", stag,
            nashBlind({Strategy::pure(2, 0), Strategy::pure(2, 0)}), Claim::Strong, true),
      1, 1);
  add(entry("stag_hunt_mixed", "wishful mixing below the mixed equilibrium", toIntervalForm(stag),
            forged(forgeComplements, scalars(0.4, 0.4)), Claim::Bbe, true),
      0.16, 0.16);

  const FiniteGame hd = hawkDoveGame(1, 0.5, 1, 0.5);
  add(entry("hawk_dove_pure", "blind beliefs at (dove, hawk)", hd,
            nashBlind({Strategy::pure(2, 0), Strategy::pure(2, 1)}), Claim::Strong, true),
      0.5, 2);
  add(entry("hawk_dove_mixed", "wishful mixing with less weight on dove", toIntervalForm(hd),
            forged(forgeSubstitutes, scalars(0.3, 0.3)), Claim::Bbe, true),
      0.615, 0.615);

  {
    auto e = entry("no_folk", "(a, a) cannot be forged: no best reply has full undominated support", noFolkGame(),
                   [](const Game& g) {
                     return forgeFolkFinite(g, {Strategy::pure(3, 0), Strategy::pure(3, 0)}).config;
                   },
                   Claim::Weak, false);
    e.expectRefusal = true;
    add(std::move(e));
  }
  return out;
}

LibraryEntry exampleByName(const std::string& name) {
  for (auto& e : exampleLibrary())
    if (e.name == name) return e;
  throw ValidationError("unknown example '" + name + "'");
}

ExampleOutcome runExample(const LibraryEntry& e, const DeviationFamily& family, const VerifyOptions& opt) {
  ExampleOutcome out;
  out.name = e.name;
  Configuration c;
  try {
    c = e.build(*e.game);
  } catch (const PreconditionError& err) {
    out.pass = e.expectRefusal;
    out.detail = std::string(e.expectRefusal ? "refused as expected: " : "unexpected refusal: ") + err.what();
    return out;
  }
  out.config = c;
  if (e.expectRefusal) {
    out.detail = "construction succeeded but a refusal was expected";
    return out;
  }
  VerifyOptions o = opt;
  o.allowNonMonotone = o.allowNonMonotone || e.nonMonotone;
  const VerificationReport rep =
      e.p ? verifyP(*e.game, c, e.claim, family, *e.p, o) : verify(*e.game, c, e.claim, family, o);
  std::ostringstream os;
  bool ok = rep.holds == e.expectHolds && rep.guardViolations.empty();
  os << toString(e.claim) << (e.p ? " p=" + formatNumber(*e.p) : "") << ": "
     << (rep.holds ? "holds_on_family" : "refuted") << " (expected " << (e.expectHolds ? "holds" : "refuted") << ")";
  for (int i = 0; i < 2; ++i) {
    os << "; payoff " << i + 1 << " = " << formatNumber(rep.incumbentPayoff[i]);
    if (!std::isnan(e.payoff[i]) && std::abs(rep.incumbentPayoff[i] - e.payoff[i]) > 1e-4) {
      ok = false;
      os << " (expected " << formatNumber(e.payoff[i]) << ")";
    }
  }
  for (const auto& v : rep.guardViolations) os << "; " << v;
  out.pass = ok;
  out.detail = os.str();
  out.report = rep;
  return out;
}

}  // namespace bbe
