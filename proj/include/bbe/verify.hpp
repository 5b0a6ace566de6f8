#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bbe/analysis.hpp"

namespace bbe {

enum class Claim { Weak, Bbe, Strong };
const char* toString(Claim c);
Claim parseClaim(const std::string& s);

// Deviation beliefs tried for each player. Refutations found over the family
// are sound; a claim that survives only means no counterexample was found.
struct DeviationFamily {
  int blindGrid = 101;          // interval games: evenly spaced blind targets
  int simplexResolution = 10;   // finite games with <= 3 actions: barycentric grid
  bool includeIdentity = true;
  int piecewiseSamples = 64;    // random monotone 4-breakpoint beliefs / random stochastic matrices
  std::uint64_t seed = 20240611;
  std::vector<BiasedBelief> custom;

  std::string describe() const;
};

// Beliefs player `deviator` may switch to, in family order.
std::vector<BiasedBelief> familyBeliefs(const Game& g, int deviator, const DeviationFamily& family);

struct Counterexample {
  int deviator = 0;
  int familyIndex = -1;
  BiasedBelief belief;
  Profile equilibrium;
  double deviatorPayoff = 0.0;
  double incumbentPayoff = 0.0;
  double gain = 0.0;
};

// Per-deviation summary; gains are realized payoff minus incumbent payoff.
struct DeviationOutcome {
  int deviator = 0;
  int familyIndex = 0;
  int equilibria = 0;
  double minGain = 0.0;
  double maxGain = 0.0;
  double minPlausibleGain = 0.0;
  bool complete = true;
};

struct VerificationReport {
  Claim claim = Claim::Weak;
  std::optional<double> p;
  bool holds = true;
  // For bbe claims the verdict uses plausible equilibria only; this is the
  // same judgement over all equilibria, carried for borderline plausibility.
  bool unfilteredHolds = true;
  std::optional<Counterexample> counterexample;
  int equilibriaExamined = 0;
  int deviationsTried = 0;
  int incompleteSolves = 0;
  std::array<double, 2> incumbentPayoff{0, 0};
  std::string family;
  std::string caveat;
  std::vector<std::string> guardViolations;
  std::vector<DeviationOutcome> outcomes;
};

struct VerifyOptions {
  bool allowNonMonotone = false;
  int grid = kDefaultGrid;
  Exec exec = Exec::Parallel;
  double tolerance = 1e-6;  // a deviation must gain more than this
};

VerificationReport verify(const Game& g, const Configuration& c, Claim claim, const DeviationFamily& family = {},
                          const VerifyOptions& opt = {});
// Partial observability: the non-deviator notices a deviation with
// probability p and otherwise keeps its configuration strategy.
VerificationReport verifyP(const Game& g, const Configuration& c, Claim claim, const DeviationFamily& family, double p,
                           const VerifyOptions& opt = {});

// Perceived payoffs of the restricted game after player `deviator` switches
// to `dev`, the non-deviator keeping `incumbent` and, unobserved, `target`.
// At p = 1 this is the ordinary biased game.
PerceivedGame restrictedBiasedGame(const Game& g, int deviator, const BiasedBelief& dev, const BiasedBelief& incumbent,
                                   const Profile& target, double p);

// Expected true payoff of the deviator at an equilibrium of the restricted game.
double realizedPayoff(const Game& g, int deviator, const Profile& eq, const Profile& target, double p);

// Solves the deviation game once; exposed for replay and tests.
struct DeviationResult {
  EquilibriumSet equilibria;  // after the plausibility filter
  std::vector<double> gains;  // parallel to equilibria.profiles
};
DeviationResult evaluateDeviation(const Game& g, const Configuration& c, int deviator, const BiasedBelief& dev,
                                  double p = 1.0, int grid = kDefaultGrid);

}  // namespace bbe
