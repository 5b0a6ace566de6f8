#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bbe/taxonomy.hpp"

namespace bbe {

enum class Verdict { MemberSufficient, MemberNecessaryOnly, NonMember, Boundary };
enum class Condition { Undominated, Minmax, InvestmentDirection };

const char* toString(Verdict v);
const char* toString(Condition c);

struct FailedCondition {
  Condition condition;
  int player;
};

// Margins are positive when the condition holds with room to spare.
// minmax is pi_i - M_i^U (necessary); sufficient is pi_i - Mtilde_i (must be
// strictly positive); investment is the class-specific slack against the
// best reply.
struct MembershipVerdict {
  Verdict status = Verdict::NonMember;
  std::vector<FailedCondition> failed;
  std::array<double, 2> undominated{0, 0};
  std::array<double, 2> minmax{0, 0};
  std::array<double, 2> sufficient{0, 0};
  std::array<double, 2> investment{0, 0};
  std::array<double, 2> payoff{0, 0};
};

// Everything membership needs that does not depend on the profile. Built
// once and shared by the raster and by pointwise tests so both see the same
// numbers.
struct MembershipContext {
  std::shared_ptr<const IntervalGame> game;
  GameClass cls;
  std::array<UndominatedSet, 2> undominated;
  std::array<double, 2> MU{0, 0};
  std::array<double, 2> Mtilde{0, 0};
  std::array<double, 2> lipschitz{0, 0};
  int resolution = kDefaultGrid;
  std::array<double, 2> step{0, 0};
  std::array<double, 2> strategyBand{0, 0};
  std::array<double, 2> payoffBand{0, 0};

  // Centre of lattice cell k along player p's axis.
  double cellCenter(int p, int k) const;
};

// Throws UnsupportedError unless the game (or its two-action interval form)
// has positive externalities and a determinate class.
MembershipContext membershipContext(const Game& g, int resolution = kDefaultGrid, Exec exec = Exec::Serial);

// Pointwise test. `br` optionally supplies precomputed best replies
// (br[0] = BR_1(s2), br[1] = BR_2(s1)).
MembershipVerdict membershipTest(const MembershipContext& ctx, double s1, double s2,
                                 const std::array<Interval, 2>* br = nullptr);
MembershipVerdict membershipTest(const Game& g, const Profile& s);

struct Marker {
  std::string label;
  double s1 = 0.0, s2 = 0.0;
};

struct RegionRaster {
  int resolution = 0;
  std::array<double, 2> lo{0, 0}, hi{0, 0}, step{0, 0};
  std::vector<MembershipVerdict> cells;  // index a * resolution + b, a along s1
  std::vector<Marker> markers;
  const MembershipVerdict& at(int a, int b) const { return cells[static_cast<size_t>(a) * resolution + b]; }
};

RegionRaster rasterizeRegion(const MembershipContext& ctx, Exec exec = Exec::Parallel);
RegionRaster rasterizeRegion(const Game& g, int resolution, Exec exec = Exec::Parallel);
// Adds Nash and Stackelberg markers to a raster.
void addMarkers(RegionRaster& r, const Game& g);

struct NashBBE {
  Configuration config;
  bool strong = false;
};
// Blind beliefs fixed at the opponent's equilibrium strategy. With
// `requireStrict` a non-strict equilibrium is a precondition failure.
NashBBE nashAsBBE(const Game& g, const Profile& nash, bool requireStrict = false);

struct ZeroSumResult {
  bool isZeroSum = false;
  double constant = 0.0;  // pi_1 + pi_2
  double value1 = 0.0;    // player 1's maxmin payoff
};
ZeroSumResult zeroSumCheck(const Game& g);

struct DominantStrategy {
  int player = 0;
  Strategy strategy;
};
std::vector<DominantStrategy> dominantStrategies(const Game& g);
std::optional<DominantStrategy> dominantStrategyCheck(const Game& g);

enum class Attitude { Wishful, Pessimistic, Neutral, ExemptExtreme };
const char* toString(Attitude a);
struct AttitudeReport {
  Attitude attitude = Attitude::Neutral;
  double perceived = 0.0;
  double actual = 0.0;
};
std::array<AttitudeReport, 2> wishfulThinkingCheck(const Game& g, const Configuration& c);

// Upper bound on |d pi_i / d s_p| over a 65x65 lattice (p = i: own strategy).
double lipschitzBound(const IntervalGame& g, int i, int p);

}  // namespace bbe
