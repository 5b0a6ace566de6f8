#pragma once

#include <array>
#include <string>

#include "bbe/analysis.hpp"

namespace bbe {

enum class Externalities { Positive, Negative, Mixed, None };
enum class Differences { Complements, Substitutes, Opposites, Indeterminate };

const char* toString(Externalities e);
const char* toString(Differences d);

// Sign evidence: +1, -1, 0 (within tolerance, ambiguous) or 2 (flat sample,
// both derivatives vanish, excluded from the verdict).
struct GameClass {
  Externalities externalities = Externalities::Mixed;
  Differences differences = Differences::Indeterminate;
  int complementPlayer = -1;  // opposites: whose payoff has the positive cross-partial
  int lattice = 33;
  std::array<Eigen::MatrixXi, 2> externalitySign;
  std::array<Eigen::MatrixXi, 2> crossSign;
  std::array<int, 2> ambiguous{0, 0};
  std::array<int, 2> flat{0, 0};
  std::array<double, 2> tolerance{0.0, 0.0};

  bool determinate() const { return differences != Differences::Indeterminate; }
  std::string summary() const;
};

GameClass classify(const IntervalGame& g, Exec exec = Exec::Serial);

// Smallest equilibrium of a complements game; throws UnsupportedError for
// other classes.
Profile lowestNash(const IntervalGame& g, int grid = kDefaultGrid);

// The game with player `player`'s strategy relabelled s -> lo + hi - s.
IntervalGame relabel(const IntervalGame& g, int player);

}  // namespace bbe
