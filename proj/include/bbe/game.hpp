#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "bbe/expr.hpp"

namespace bbe {

// Players are indexed 0 and 1 internally; files and messages use 1 and 2.
inline int other(int i) { return 1 - i; }

class DomainError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class ValidationError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Operation not defined for this game class (e.g. no monotone structure).
class UnsupportedError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Caller broke an operation's precondition (not Nash, not monotone, ...).
class PreconditionError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

constexpr double kSimplexTol = 1e-9;
constexpr double kReplyTol = 1e-6;  // best-reply tolerance in payoff units

// A scalar for interval games, a probability vector for finite games.
struct Strategy {
  double x = 0.0;
  Eigen::VectorXd w;

  Strategy() = default;
  Strategy(double v) : x(v) {}  // NOLINT: scalar strategies read naturally
  explicit Strategy(Eigen::VectorXd weights) : w(std::move(weights)) {}

  bool mixed() const { return w.size() > 0; }
  static Strategy pure(int n, int action);
  static Strategy uniform(int n);
};

double distance(const Strategy& a, const Strategy& b);
std::string describe(const Strategy& s);

struct IntervalGame {
  std::string name;
  std::array<double, 2> lo{0.0, 0.0};
  std::array<double, 2> hi{1.0, 1.0};
  std::array<Expr, 2> payoff;               // payoff[i] is written in (s1, s2)
  std::array<std::string, 2> source;        // expression text as loaded
  Params params;
  bool concave = true;       // own-strategy concavity on the check grid
  bool quasiConcave = true;  // single-peaked slices; what the solvers rely on

  double width(int i) const { return hi[i] - lo[i]; }
  // Payoff of player i when it plays `own` and the opponent plays `opp`.
  double u(int i, double own, double opp) const {
    return i == 0 ? payoff[0](own, opp) : payoff[1](opp, own);
  }
  double u12(int i, double s1, double s2) const { return payoff[i](s1, s2); }
};

struct FiniteGame {
  std::string name;
  std::array<std::vector<std::string>, 2> actions;
  std::array<Eigen::MatrixXd, 2> payoff;    // n1 x n2, rows are player 1's actions

  int n(int i) const { return static_cast<int>(actions[i].size()); }
  // Player i's matrix with its own actions as rows.
  Eigen::MatrixXd own(int i) const { return i == 0 ? payoff[0] : Eigen::MatrixXd(payoff[1].transpose()); }
  double u(int i, const Eigen::VectorXd& own_w, const Eigen::VectorXd& opp_w) const;
  int actionIndex(int i, const std::string& label) const;
};

using Game = std::variant<IntervalGame, FiniteGame>;

inline bool isInterval(const Game& g) { return std::holds_alternative<IntervalGame>(g); }
inline const IntervalGame& asInterval(const Game& g) { return std::get<IntervalGame>(g); }
inline const FiniteGame& asFinite(const Game& g) { return std::get<FiniteGame>(g); }
const std::string& gameName(const Game& g);

// True payoff of player i for a profile given as (own, opponent).
double payoff(const Game& g, int i, const Strategy& own, const Strategy& opp);

// Builds an interval game from expression strings, checking the invariants.
IntervalGame makeIntervalGame(std::string name, std::array<double, 2> lo, std::array<double, 2> hi,
                              std::array<std::string, 2> payoffs, Params params = {});
FiniteGame makeFiniteGame(std::string name, std::array<std::vector<std::string>, 2> actions,
                          Eigen::MatrixXd payoff1, Eigen::MatrixXd payoff2);

// Concavity of payoff_i in the own strategy on a 33x33 check grid.
bool checkOwnConcavity(const IntervalGame& g, int i, int grid = 33);
// Every own-strategy slice rises then falls on a 129-point grid.
bool checkOwnQuasiConcavity(const IntervalGame& g, int i, int grid = 128);

// Identification of a 2x2 game with the interval game on [0,1]^2 where s_i is
// the probability of player i's first action.
IntervalGame toIntervalForm(const FiniteGame& g);

void validateStrategy(const Game& g, int i, const Strategy& s);

}  // namespace bbe
