#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bbe/forge.hpp"
#include "bbe/verify.hpp"

namespace bbe {

using Json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;
extern const char* const kToolVersion;

// Malformed or schema-violating input file. The message carries the file
// name and, where known, the line and column or the JSON path.
class SchemaError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Provenance block written into every artifact. Replaying the manifest with
// the same binary reproduces the artifact byte for byte.
struct RunManifest {
  std::string subcommand;
  std::string gamePath;
  std::string configPath;
  std::map<std::string, double> params;  // parameter bindings of the game
  int grid = kDefaultGrid;
  std::uint64_t seed = 0;
  std::string family;
  std::vector<std::string> outputs;
  std::string version = kToolVersion;

  Json toJson() const;
  static RunManifest fromJson(const Json& j);
};

// Parses a file's text; JSON syntax errors are reported as file:line:column.
Json parseJsonText(const std::string& text, const std::string& where);
Json readJsonFile(const std::string& path);
void writeTextFile(const std::string& path, const std::string& text);

Game gameFromJson(const Json& j, const std::string& where);
Game loadGame(const std::string& path);
Json gameToJson(const Game& g);

// Interval strategies are numbers; finite strategies are an action label or
// a weight vector.
Strategy strategyFromJson(const Game& g, int player, const Json& j, const std::string& where);
Json strategyToJson(const Strategy& s);

// Beliefs are held by `holder` and act on the opponent's strategies.
BiasedBelief beliefFromJson(const Game& g, int holder, const Json& j, const std::string& where);
Json beliefToJson(const BiasedBelief& b);

struct ConfigFile {
  std::string path;
  std::string gamePath;  // empty when the game is inline
  Game game;
  Configuration config;
  std::optional<Claim> claim;
  std::optional<double> p;
  bool allowNonMonotone = false;
};

// A configuration document names its game by path (relative to the
// document) or embeds it under "game".
ConfigFile configFromJson(const Json& j, const std::string& where, const std::string& baseDir);
ConfigFile loadConfig(const std::string& path);
Json configToJson(const Game& g, const Configuration& c, const std::string& gamePath = "");

Json forgedToJson(const Game& g, const Forged& f, const std::string& gamePath = "");
Json reportToJson(const Game& g, const Configuration& c, const VerificationReport& r, const DeviationFamily& family,
                  int grid);

Json familyToJson(const DeviationFamily& f);
DeviationFamily familyFromJson(const Game& g, const Json& j, const std::string& where);

// Family flag syntax: comma separated key=value with keys blind, simplex,
// pw, identity.
DeviationFamily parseFamily(const std::string& spec, std::uint64_t seed);

}  // namespace bbe
