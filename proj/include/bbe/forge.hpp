#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "bbe/characterize.hpp"

namespace bbe {

// Tabulated punishment threshold for a deviator. Off the target on the
// punishing side, phi[k] bounds how far the opponent's belief about the
// deviator may go before some best reply to it lets the deviator gain.
struct ThresholdMap {
  int deviator = 0;
  bool upward = true;         // true: punishment below the target (complements side)
  double target = 0.0;        // s_i*
  double endpoint = 0.0;      // s^e, the belief value on the blind side
  std::vector<double> s;      // deviator strategies on the punishing side
  std::vector<double> phi;    // raw thresholds
  std::vector<double> belief; // tabulated belief values (monotone, strictly inside)
};

struct PunishmentProfile {
  std::array<Strategy, 2> punisher;  // punisher[i]: opponent strategy holding player i to M_i^U
  std::array<double, 2> D{0, 0};     // pi_i(s*) - M_i^U
  std::array<double, 2> K{0, 0};     // own-strategy Lipschitz bound (with safety factor)
  double epsilon = 0.0;
};

struct Forged {
  Configuration config;
  bool strongClaim = false;  // the construction's own claim, still to be verified
  bool monotone = true;
  std::string construction;
  std::vector<ThresholdMap> thresholds;
  std::optional<PunishmentProfile> punishment;
  std::string note;
};

// Monotone constructions for the three classes; each refuses a target that
// is not member_sufficient, naming the failing margin.
Forged forgeComplements(const Game& g, const Profile& target);
Forged forgeSubstitutes(const Game& g, const Profile& target);
Forged forgeOpposites(const Game& g, const Profile& target);
// Dispatches on the game's class.
Forged forgeMonotone(const Game& g, const Profile& target);

// Leader plays its undominated Stackelberg strategy with a blind belief;
// the follower keeps the identity belief.
Forged forgeStackelbergStubborn(const Game& g, int leader);
// Interval games under partial observability: the follower notices a
// deviation with probability p. The leader's strategy is the fixed point x
// of argmax_s p*u(s, BR(s)) + (1-p)*u(s, BR(x)); p = 1 gives the
// Stackelberg strategy and p = 0 a Nash strategy.
Forged forgeStackelbergPartial(const Game& g, int leader, double p);

// Blind beliefs at opponents that make every undominated action a best reply.
Forged forgeFolkFinite(const Game& g, const Profile& target);
// Non-monotone psi^eps construction for interval games.
Forged forgeFolkInterval(const Game& g, const Profile& target);

}  // namespace bbe
