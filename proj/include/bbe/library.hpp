#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bbe/forge.hpp"
#include "bbe/verify.hpp"

namespace bbe {

// Worked games. Interval strategies are quantities, prices or efforts;
// two-action finite games index actions in table order.
IntervalGame cournotGame();
IntervalGame cournotCapacityGame();
IntervalGame hotellingGame(double t = 1.0, double M = 3.0);
IntervalGame inputGame(double rho = 0.9);
FiniteGame matchingPenniesGame();
FiniteGame rpsGame();       // win 1, lose -1: zero-sum with value 0
FiniteGame rpsTableGame();  // win 1, lose 0 as tabulated
FiniteGame pdWithdrawalGame();
FiniteGame prisonersDilemmaGame();
FiniteGame travelersDilemmaGame();
FiniteGame stagHuntGame(double g1, double l1, double g2, double l2);
FiniteGame hawkDoveGame(double g1, double l1, double g2, double l2);
FiniteGame noFolkGame();  // all actions undominated, no full-support best reply

// Probability that player i plays the first action (stag, resp. dove) in
// the mixed equilibrium, in terms of the opponent's parameters.
double stagHuntMixed(double gj, double lj);
double hawkDoveMixed(double gj, double lj);

struct LibraryEntry {
  std::string name;
  std::string summary;
  std::shared_ptr<const Game> game;
  // Builds the configuration; for refusal entries the call must throw
  // PreconditionError.
  std::function<Configuration(const Game&)> build;
  Claim claim = Claim::Strong;
  bool expectHolds = true;
  bool expectRefusal = false;
  bool nonMonotone = false;  // verified with the monotonicity override
  std::optional<double> p;
  std::array<double, 2> payoff{NAN, NAN};  // expected incumbent payoffs; NaN = unchecked
};

std::vector<LibraryEntry> exampleLibrary();
// Throws ValidationError for an unknown name.
LibraryEntry exampleByName(const std::string& name);

struct ExampleOutcome {
  std::string name;
  bool pass = false;
  std::string detail;
  std::optional<Configuration> config;
  std::optional<VerificationReport> report;
};
ExampleOutcome runExample(const LibraryEntry& e, const DeviationFamily& family = {}, const VerifyOptions& opt = {});

}  // namespace bbe
