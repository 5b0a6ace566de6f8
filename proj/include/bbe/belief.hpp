#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "bbe/game.hpp"

namespace bbe {

enum class BeliefKind { Identity, Blind, PiecewiseLinear, StochasticLinear };

const char* toString(BeliefKind k);

// Player i's distorted view of the opponent: a map from the opponent's
// actual strategy to the strategy player i acts against.
struct BiasedBelief {
  BeliefKind kind = BeliefKind::Identity;
  Strategy target;                                  // Blind
  std::vector<std::pair<double, double>> points;    // PiecewiseLinear (input, output)
  Eigen::MatrixXd matrix;                           // StochasticLinear, column-stochastic

  static BiasedBelief identity();
  static BiasedBelief blind(Strategy target);
  static BiasedBelief piecewise(std::vector<std::pair<double, double>> points);
  static BiasedBelief stochastic(Eigen::MatrixXd m);

  // Scalar fast path for interval games; no domain checks.
  double operator()(double s) const;
  bool isBlind() const { return kind == BeliefKind::Blind; }
};

// Checks the belief against the opponent's strategy space of player
// `holder`; throws ValidationError on mismatch.
void validateBelief(const Game& g, int holder, const BiasedBelief& b);

// psi(s) with input validation against the opponent space of `holder`.
Strategy evaluateBelief(const Game& g, int holder, const BiasedBelief& b, const Strategy& s);
// Without a game the input is trusted.
Strategy evaluateBelief(const BiasedBelief& b, const Strategy& s);

bool isMonotone(const BiasedBelief& b, const Game& g, int holder);

// Matrix form of a belief over an opponent with n actions.
Eigen::MatrixXd beliefMatrix(const BiasedBelief& b, int n);

std::string describe(const BiasedBelief& b);
bool operator==(const BiasedBelief& a, const BiasedBelief& b);

struct Configuration {
  std::array<BiasedBelief, 2> beliefs;
  std::array<Strategy, 2> strategies;
};

struct BiasedGame {
  const Game* base = nullptr;
  std::array<BiasedBelief, 2> beliefs;
};

// pi_i(s_i, psi_i(s_j)).
double perceivedPayoff(const BiasedGame& bg, int i, const Strategy& s_i, const Strategy& s_j);

// Largest perceived gain available to player i by a unilateral change in
// the biased game induced by the configuration. Zero up to rounding when
// the configuration is an equilibrium of its biased game.
double perceivedRegret(const Game& g, const Configuration& c, int i);
// Throws ValidationError naming the player if regret exceeds kReplyTol.
void checkConfiguration(const Game& g, const Configuration& c);

}  // namespace bbe
