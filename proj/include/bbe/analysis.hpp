#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bbe/belief.hpp"
#include "bbe/optimize.hpp"
#include "bbe/parallel.hpp"

namespace bbe {

constexpr int kDefaultGrid = 400;

using Profile = std::array<Strategy, 2>;

// Best replies of one player. For interval games `range` is the argmax
// interval; for finite games `actions` lists the tied pure best replies and
// the best-reply set is their simplex.
struct BestReplySet {
  Interval range;
  std::vector<int> actions;
  double value = 0.0;
};

ArgmaxResult bestReplyInterval(const IntervalGame& g, int i, double s_j);
BestReplySet bestReply(const Game& g, int i, const Strategy& s_j);
// Pure best replies of an own-perspective matrix against y.
std::vector<int> pureBestReplies(const Eigen::MatrixXd& own, const Eigen::VectorXd& y, double* value = nullptr);

// Opponent strategies against which s_i is a best reply.
struct InverseBestReply {
  std::vector<Interval> intervals;  // interval games
  std::optional<Strategy> witness;  // finite games: one such opponent strategy
  bool empty() const { return intervals.empty() && !witness; }
};
InverseBestReply inverseBestReply(const Game& g, int i, const Strategy& s_i, int grid = kDefaultGrid);

struct UndominatedSet {
  std::vector<Interval> intervals;           // interval games
  std::vector<std::vector<int>> supports;    // finite: supports that are jointly best replies
  bool exhaustive = true;                    // finite: false when the support search was truncated
  bool contains(const Strategy& s, double tol) const;
  double lo() const { return intervals.front().lo; }
  double hi() const { return intervals.back().hi; }
};
UndominatedSet undominatedSet(const Game& g, int i, int grid = kDefaultGrid);

struct MinmaxResult {
  double value = 0.0;
  Strategy opponent;  // minimising (perceived) opponent strategy
};
// M_i^U: the opponent restricted to its undominated strategies.
MinmaxResult undominatedMinmax(const Game& g, int i, int grid = kDefaultGrid);
// The opponent best-replies to an arbitrary perceived strategy of player i,
// ties broken in player i's favour.
MinmaxResult biasedBeliefMinmax(const Game& g, int i, int grid = kDefaultGrid);

struct StackelbergResult {
  Strategy leader;
  Strategy follower;
  double payoff = 0.0;
  std::string caveat;
};
StackelbergResult stackelberg(const Game& g, int i, int grid = kDefaultGrid);

// Perceived payoffs of a biased game or of its partial-observability
// restriction. Interval games use f[i](own, opp); finite games use the
// own-perspective matrices P[i] (rows are player i's actions).
struct PerceivedGame {
  const Game* base = nullptr;
  std::array<std::function<double(double, double)>, 2> f;
  std::array<bool, 2> independent{false, false};  // f[i] ignores the opponent
  std::array<Eigen::MatrixXd, 2> P;
};

PerceivedGame perceivedGame(const BiasedGame& bg);
PerceivedGame perceivedGame(const Game& g);  // identity beliefs

// Largest unilateral perceived gain of player i at the profile.
double perceivedGap(const PerceivedGame& pg, int i, const Profile& s);
bool isPerceivedEquilibrium(const PerceivedGame& pg, const Profile& s);

struct EquilibriumSet {
  std::vector<Profile> profiles;
  std::vector<bool> plausible;  // parallel to profiles after plausibleFilter
  bool complete = true;
  std::string caveat;
};

EquilibriumSet solveEquilibria(const PerceivedGame& pg, int grid = kDefaultGrid);
EquilibriumSet nashOfBiasedGame(const BiasedGame& bg, int grid = kDefaultGrid);
EquilibriumSet nashEquilibria(const Game& g, int grid = kDefaultGrid);

// Drops profiles that are implausible relative to the configuration the
// deviation started from. `incumbent` is the non-deviator's belief.
EquilibriumSet plausibleFilter(const PerceivedGame& pg, const Configuration& origin, int deviator,
                               const EquilibriumSet& eqs);

// Lattice mutual-best-reply scan of an interval game: every lattice profile
// where each coordinate is within `slack` of the best lattice reply.
std::vector<std::array<double, 2>> bruteForceNash(const IntervalGame& g, int grid, double slack, Exec exec);

// Finite-game helpers shared with the characterisation and forging code.
// Opponent mixtures over which every action in `support` is a best reply.
std::optional<Eigen::VectorXd> supportWitness(const Eigen::MatrixXd& own, const std::vector<int>& support);
// Witness that `support` is exactly the best-reply set, if one exists.
std::optional<Eigen::VectorXd> exactBestReplyWitness(const Eigen::MatrixXd& own, const std::vector<int>& support);
std::vector<std::vector<int>> candidateSupports(int n, bool* exhaustive = nullptr);
std::vector<int> supportOf(const Eigen::VectorXd& w, double tol = kSimplexTol);

}  // namespace bbe
