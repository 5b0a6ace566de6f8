#include "bbe/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace bbe {

const char* const kToolVersion = "1.0.0";

namespace fs = std::filesystem;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& msg) { throw SchemaError(where + ": " + msg); }

const Json& need(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(where, std::string("missing field \"") + key + "\"");
  return *it;
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

void checkVersion(const Json& j, const std::string& where) {
  const Json& v = need(j, "schema_version", where);
  if (!v.is_number_integer() || v.get<int>() != kSchemaVersion)
    fail(where, "unsupported schema_version " + v.dump() + " (expected " + std::to_string(kSchemaVersion) + ")");
}

Eigen::MatrixXd matrixFromJson(const Json& j, int rows, int cols, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows)
    fail(where, "expected " + std::to_string(rows) + " rows");
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const std::string at = where + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || static_cast<int>(j[r].size()) != cols)
      fail(at, "expected " + std::to_string(cols) + " columns");
    for (int c = 0; c < cols; ++c) m(r, c) = number(j[r][c], at + "[" + std::to_string(c) + "]");
  }
  return m;
}

Json matrixToJson(const Eigen::MatrixXd& m) {
  Json out = Json::array();
  for (int r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

// Shape checks only; domain checks happen against the holder's opponent.
BiasedBelief parseBelief(const Json& j, const std::string& where) {
  const std::string kind = need(j, "kind", where).is_string() ? j["kind"].get<std::string>() : "";
  if (kind == "identity") return BiasedBelief::identity();
  if (kind == "blind") {
    const Json& t = need(j, "target", where);
    if (t.is_number()) return BiasedBelief::blind(Strategy(t.get<double>()));
    if (t.is_array()) {
      Eigen::VectorXd w(t.size());
      for (size_t k = 0; k < t.size(); ++k) w[k] = number(t[k], where + ".target[" + std::to_string(k) + "]");
      return BiasedBelief::blind(Strategy(w));
    }
    fail(where + ".target", "expected a number or a weight vector");
  }
  if (kind == "piecewise_linear") {
    const Json& bp = need(j, "breakpoints", where);
    if (!bp.is_array()) fail(where + ".breakpoints", "expected an array of [input, output] pairs");
    std::vector<std::pair<double, double>> pts;
    for (size_t k = 0; k < bp.size(); ++k) {
      const std::string at = where + ".breakpoints[" + std::to_string(k) + "]";
      if (!bp[k].is_array() || bp[k].size() != 2) fail(at, "expected [input, output]");
      pts.emplace_back(number(bp[k][0], at), number(bp[k][1], at));
    }
    try {
      return BiasedBelief::piecewise(std::move(pts));
    } catch (const std::invalid_argument& e) {
      fail(where, e.what());
    }
  }
  if (kind == "stochastic_linear") {
    const Json& m = need(j, "matrix", where);
    if (!m.is_array() || m.empty() || !m[0].is_array()) fail(where + ".matrix", "expected a nonempty matrix");
    try {
      return BiasedBelief::stochastic(matrixFromJson(m, static_cast<int>(m.size()), static_cast<int>(m[0].size()),
                                                     where + ".matrix"));
    } catch (const std::invalid_argument& e) {
      fail(where, e.what());
    }
  }
  fail(where + ".kind", "unknown belief kind '" + kind +
                            "' (expected identity, blind, piecewise_linear or stochastic_linear)");
}

std::string dirOf(const std::string& path) {
  const fs::path p(path);
  return p.has_parent_path() ? p.parent_path().string() : std::string(".");
}

}  // namespace

Json RunManifest::toJson() const {
  Json j;
  j["subcommand"] = subcommand;
  j["game_path"] = gamePath;
  j["config_path"] = configPath;
  Json p = Json::object();
  for (const auto& [k, v] : params) p[k] = v;
  j["params"] = p;
  j["grid"] = grid;
  j["seed"] = seed;
  j["family"] = family;
  j["outputs"] = outputs;
  j["version"] = version;
  return j;
}

RunManifest RunManifest::fromJson(const Json& j) {
  RunManifest m;
  const std::string where = "manifest";
  m.subcommand = need(j, "subcommand", where).get<std::string>();
  m.gamePath = j.value("game_path", "");
  m.configPath = j.value("config_path", "");
  if (j.contains("params"))
    for (const auto& [k, v] : j["params"].items()) m.params[k] = number(v, where + ".params." + k);
  m.grid = j.value("grid", kDefaultGrid);
  m.seed = j.value("seed", std::uint64_t{0});
  m.family = j.value("family", "");
  if (j.contains("outputs")) m.outputs = j["outputs"].get<std::vector<std::string>>();
  m.version = j.value("version", "");
  return m;
}

Json parseJsonText(const std::string& text, const std::string& where) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    // Translate the byte offset into a line and column.
    int line = 1, col = 1;
    for (size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string msg = e.what();
    if (auto pos = msg.find("syntax error"); pos != std::string::npos) msg = msg.substr(pos);
    throw SchemaError(where + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
  }
}

Json readJsonFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parseJsonText(ss.str(), path);
}

void writeTextFile(const std::string& path, const std::string& text) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot write file");
  out << text;
}

Game gameFromJson(const Json& j, const std::string& where) {
  checkVersion(j, where);
  const std::string kind = need(j, "kind", where).is_string() ? j["kind"].get<std::string>() : "";
  const std::string name = j.value("name", fs::path(where).stem().string());
  Params params;
  if (j.contains("params")) {
    if (!j["params"].is_object()) fail(where + ".params", "expected a name -> number object");
    for (const auto& [k, v] : j["params"].items()) params[k] = number(v, where + ".params." + k);
  }
  const Json& pay = need(j, "payoffs", where);
  if (!pay.is_array() || pay.size() != 2) fail(where + ".payoffs", "expected one entry per player");

  if (kind == "interval") {
    const Json& iv = need(j, "intervals", where);
    if (!iv.is_array() || iv.size() != 2) fail(where + ".intervals", "expected [[lo1, hi1], [lo2, hi2]]");
    std::array<double, 2> lo{}, hi{};
    std::array<std::string, 2> src;
    for (int i = 0; i < 2; ++i) {
      const std::string at = where + ".intervals[" + std::to_string(i) + "]";
      if (!iv[i].is_array() || iv[i].size() != 2) fail(at, "expected [lo, hi]");
      lo[i] = number(iv[i][0], at);
      hi[i] = number(iv[i][1], at);
      if (!pay[i].is_string()) fail(where + ".payoffs[" + std::to_string(i) + "]", "expected an expression string");
      src[i] = pay[i].get<std::string>();
    }
    try {
      return makeIntervalGame(name, lo, hi, src, params);
    } catch (const ParseError& e) {
      fail(where + ".payoffs", e.what());
    } catch (const std::invalid_argument& e) {
      fail(where, e.what());
    }
  }
  if (kind == "finite") {
    const Json& acts = need(j, "actions", where);
    if (!acts.is_array() || acts.size() != 2) fail(where + ".actions", "expected one label list per player");
    std::array<std::vector<std::string>, 2> labels;
    for (int i = 0; i < 2; ++i) {
      if (!acts[i].is_array() || acts[i].empty())
        fail(where + ".actions[" + std::to_string(i) + "]", "expected a nonempty label list");
      for (const auto& a : acts[i]) {
        if (!a.is_string()) fail(where + ".actions[" + std::to_string(i) + "]", "labels must be strings");
        labels[i].push_back(a.get<std::string>());
      }
    }
    const int n1 = static_cast<int>(labels[0].size()), n2 = static_cast<int>(labels[1].size());
    std::array<Eigen::MatrixXd, 2> m;
    for (int i = 0; i < 2; ++i) m[i] = matrixFromJson(pay[i], n1, n2, where + ".payoffs[" + std::to_string(i) + "]");
    try {
      return makeFiniteGame(name, labels, m[0], m[1]);
    } catch (const std::invalid_argument& e) {
      fail(where, e.what());
    }
  }
  fail(where + ".kind", "expected \"interval\" or \"finite\", got " + j["kind"].dump());
}

Game loadGame(const std::string& path) { return gameFromJson(readJsonFile(path), path); }

Json gameToJson(const Game& g) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["name"] = gameName(g);
  if (isInterval(g)) {
    const auto& ig = asInterval(g);
    j["kind"] = "interval";
    j["intervals"] = Json::array({Json::array({ig.lo[0], ig.hi[0]}), Json::array({ig.lo[1], ig.hi[1]})});
    j["payoffs"] = Json::array({ig.source[0], ig.source[1]});
    Json p = Json::object();
    for (const auto& [k, v] : ig.params) p[k] = v;
    j["params"] = p;
  } else {
    const auto& fg = asFinite(g);
    j["kind"] = "finite";
    j["actions"] = Json::array({fg.actions[0], fg.actions[1]});
    j["payoffs"] = Json::array({matrixToJson(fg.payoff[0]), matrixToJson(fg.payoff[1])});
  }
  return j;
}

Strategy strategyFromJson(const Game& g, int player, const Json& j, const std::string& where) {
  Strategy s;
  if (isInterval(g)) {
    s = Strategy(number(j, where));
  } else {
    const auto& fg = asFinite(g);
    if (j.is_string()) {
      try {
        s = Strategy::pure(fg.n(player), fg.actionIndex(player, j.get<std::string>()));
      } catch (const std::invalid_argument& e) {
        fail(where, e.what());
      }
    } else if (j.is_array()) {
      Eigen::VectorXd w(j.size());
      for (size_t k = 0; k < j.size(); ++k) w[k] = number(j[k], where + "[" + std::to_string(k) + "]");
      s = Strategy(w);
    } else {
      fail(where, "expected an action label or a weight vector");
    }
  }
  try {
    validateStrategy(g, player, s);
  } catch (const std::invalid_argument& e) {
    fail(where, e.what());
  }
  return s;
}

Json strategyToJson(const Strategy& s) {
  if (!s.mixed()) return s.x;
  Json a = Json::array();
  for (int k = 0; k < s.w.size(); ++k) a.push_back(s.w[k]);
  return a;
}

BiasedBelief beliefFromJson(const Game& g, int holder, const Json& j, const std::string& where) {
  BiasedBelief b = parseBelief(j, where);
  try {
    validateBelief(g, holder, b);
  } catch (const std::invalid_argument& e) {
    fail(where, e.what());
  }
  return b;
}

Json beliefToJson(const BiasedBelief& b) {
  Json j;
  j["kind"] = toString(b.kind);
  switch (b.kind) {
    case BeliefKind::Identity: break;
    case BeliefKind::Blind: j["target"] = strategyToJson(b.target); break;
    case BeliefKind::PiecewiseLinear: {
      Json bp = Json::array();
      for (const auto& [x, y] : b.points) bp.push_back(Json::array({x, y}));
      j["breakpoints"] = bp;
      break;
    }
    case BeliefKind::StochasticLinear: j["matrix"] = matrixToJson(b.matrix); break;
  }
  return j;
}

ConfigFile configFromJson(const Json& j, const std::string& where, const std::string& baseDir) {
  checkVersion(j, where);
  ConfigFile out;
  out.path = where;
  const Json& gj = need(j, "game", where);
  if (gj.is_string()) {
    fs::path gp(gj.get<std::string>());
    if (gp.is_relative()) gp = fs::path(baseDir) / gp;
    out.gamePath = gp.lexically_normal().string();
    out.game = loadGame(out.gamePath);
  } else {
    out.game = gameFromJson(gj, where + ".game");
  }
  const Json& bs = need(j, "beliefs", where);
  const Json& ss = need(j, "strategies", where);
  if (!bs.is_array() || bs.size() != 2) fail(where + ".beliefs", "expected one belief per player");
  if (!ss.is_array() || ss.size() != 2) fail(where + ".strategies", "expected one strategy per player");
  for (int i = 0; i < 2; ++i) {
    out.config.beliefs[i] = beliefFromJson(out.game, i, bs[i], where + ".beliefs[" + std::to_string(i) + "]");
    out.config.strategies[i] = strategyFromJson(out.game, i, ss[i], where + ".strategies[" + std::to_string(i) + "]");
  }
  if (j.contains("claim")) {
    try {
      out.claim = parseClaim(j["claim"].get<std::string>());
    } catch (const std::exception& e) {
      fail(where + ".claim", e.what());
    }
  }
  if (j.contains("p")) out.p = number(j["p"], where + ".p");
  out.allowNonMonotone = j.value("allow_non_monotone", false);
  return out;
}

ConfigFile loadConfig(const std::string& path) { return configFromJson(readJsonFile(path), path, dirOf(path)); }

Json configToJson(const Game& g, const Configuration& c, const std::string& gamePath) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  if (gamePath.empty())
    j["game"] = gameToJson(g);
  else
    j["game"] = gamePath;
  j["beliefs"] = Json::array({beliefToJson(c.beliefs[0]), beliefToJson(c.beliefs[1])});
  j["strategies"] = Json::array({strategyToJson(c.strategies[0]), strategyToJson(c.strategies[1])});
  return j;
}

Json forgedToJson(const Game& g, const Forged& f, const std::string& gamePath) {
  Json j = configToJson(g, f.config, gamePath);
  j["claim"] = f.strongClaim ? "strong" : "bbe";
  if (!f.monotone) j["allow_non_monotone"] = true;
  Json info;
  info["construction"] = f.construction;
  info["monotone"] = f.monotone;
  if (!f.note.empty()) info["note"] = f.note;
  for (int i = 0; i < 2; ++i) info["payoffs"].push_back(payoff(g, i, f.config.strategies[i], f.config.strategies[other(i)]));
  if (f.punishment) {
    const auto& p = *f.punishment;
    Json pj;
    pj["punisher"] = Json::array({strategyToJson(p.punisher[0]), strategyToJson(p.punisher[1])});
    pj["D"] = Json::array({p.D[0], p.D[1]});
    pj["K"] = Json::array({p.K[0], p.K[1]});
    pj["epsilon"] = p.epsilon;
    info["punishment"] = pj;
  }
  for (const auto& t : f.thresholds) {
    Json tj;
    tj["deviator"] = t.deviator + 1;
    tj["upward"] = t.upward;
    tj["target"] = t.target;
    tj["endpoint"] = t.endpoint;
    tj["samples"] = t.s.size();
    info["thresholds"].push_back(tj);
  }
  j["forged"] = info;
  return j;
}

Json familyToJson(const DeviationFamily& f) {
  Json j;
  j["blind"] = f.blindGrid;
  j["simplex"] = f.simplexResolution;
  j["identity"] = f.includeIdentity;
  j["pw"] = f.piecewiseSamples;
  j["seed"] = f.seed;
  Json c = Json::array();
  for (const auto& b : f.custom) c.push_back(beliefToJson(b));
  j["custom"] = c;
  return j;
}

DeviationFamily familyFromJson(const Game&, const Json& j, const std::string& where) {
  DeviationFamily f;
  f.blindGrid = j.value("blind", f.blindGrid);
  f.simplexResolution = j.value("simplex", f.simplexResolution);
  f.includeIdentity = j.value("identity", f.includeIdentity);
  f.piecewiseSamples = j.value("pw", f.piecewiseSamples);
  f.seed = j.value("seed", f.seed);
  if (j.contains("custom"))
    for (size_t k = 0; k < j["custom"].size(); ++k)
      f.custom.push_back(parseBelief(j["custom"][k], where + ".custom[" + std::to_string(k) + "]"));
  return f;
}

Json reportToJson(const Game& g, const Configuration& c, const VerificationReport& r, const DeviationFamily& family,
                  int grid) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["claim"] = toString(r.claim);
  if (r.p) j["p"] = *r.p;
  j["status"] = r.holds ? "holds_on_family" : "refuted";
  j["unfiltered_status"] = r.unfilteredHolds ? "holds_on_family" : "refuted";
  j["incumbent_payoffs"] = Json::array({r.incumbentPayoff[0], r.incumbentPayoff[1]});
  if (r.counterexample) {
    const auto& cx = *r.counterexample;
    Json cj;
    cj["deviator"] = cx.deviator + 1;
    cj["family_index"] = cx.familyIndex;
    cj["belief"] = beliefToJson(cx.belief);
    cj["equilibrium"] = Json::array({strategyToJson(cx.equilibrium[0]), strategyToJson(cx.equilibrium[1])});
    cj["deviator_payoff"] = cx.deviatorPayoff;
    cj["incumbent_payoff"] = cx.incumbentPayoff;
    cj["gain"] = cx.gain;
    j["counterexample"] = cj;
  } else {
    j["counterexample"] = nullptr;
  }
  j["deviations_tried"] = r.deviationsTried;
  j["equilibria_examined"] = r.equilibriaExamined;
  j["incomplete_solves"] = r.incompleteSolves;
  j["caveat"] = r.caveat;
  j["guard_violations"] = r.guardViolations;
  j["grid"] = grid;
  j["family"] = familyToJson(family);
  j["configuration"] = configToJson(g, c);
  return j;
}

DeviationFamily parseFamily(const std::string& spec, std::uint64_t seed) {
  DeviationFamily f;
  f.seed = seed;
  std::istringstream in(spec);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ValidationError("family item '" + item + "' is not key=value");
    const std::string key = item.substr(0, eq);
    int v = 0;
    try {
      size_t used = 0;
      v = std::stoi(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError("family item '" + item + "' needs an integer value");
    }
    if (v < 0) throw ValidationError("family item '" + item + "' must be nonnegative");
    if (key == "blind")
      f.blindGrid = v;
    else if (key == "simplex")
      f.simplexResolution = v;
    else if (key == "pw")
      f.piecewiseSamples = v;
    else if (key == "identity")
      f.includeIdentity = v != 0;
    else
      throw ValidationError("unknown family key '" + key + "' (expected blind, simplex, pw or identity)");
  }
  return f;
}

}  // namespace bbe
