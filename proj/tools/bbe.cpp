// Command-line front end. Exit codes: 0 success or claim holds on the
// family, 2 claim refuted, 1 any error.
#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "bbe/export.hpp"
#include "bbe/io.hpp"
#include "bbe/library.hpp"

using namespace bbe;
namespace fs = std::filesystem;

namespace {

constexpr int kExitHolds = 0;
constexpr int kExitError = 1;
constexpr int kExitRefuted = 2;

struct Common {
  int grid = kDefaultGrid;
  std::uint64_t seed = DeviationFamily{}.seed;
  std::string out;
  std::string format;
};

std::string outPath(const Common& c, const std::string& file) { return (fs::path(c.out) / file).string(); }

// Writes to --out when given, stdout otherwise; returns the recorded path.
std::string emit(const Common& c, const std::string& file, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return "-";
  }
  const std::string p = outPath(c, file);
  writeTextFile(p, text);
  return p;
}

Json profileJson(const Profile& p) { return Json::array({strategyToJson(p[0]), strategyToJson(p[1])}); }

Json intervalsJson(const std::vector<Interval>& v) {
  Json a = Json::array();
  for (const auto& iv : v) a.push_back(Json::array({iv.lo, iv.hi}));
  return a;
}

Json supportsJson(const FiniteGame& g, int i, const std::vector<std::vector<int>>& sup) {
  Json a = Json::array();
  for (const auto& s : sup) {
    Json labels = Json::array();
    for (int k : s) labels.push_back(g.actions[i][k]);
    a.push_back(labels);
  }
  return a;
}

Params gameParams(const Game& g) { return isInterval(g) ? asInterval(g).params : Params{}; }

// Interval view used by the class-dependent analyses; 2x2 finite games use
// their mixed-strategy form.
std::optional<Game> intervalView(const Game& g) {
  if (isInterval(g)) return g;
  const auto& fg = asFinite(g);
  if (fg.n(0) == 2 && fg.n(1) == 2) return Game(toIntervalForm(fg));
  return std::nullopt;
}

int cmdAnalyze(const std::string& path, const Common& c) {
  const Game g = loadGame(path);
  RunManifest m{"analyze", path, "", gameParams(g), c.grid, c.seed, "", {}};
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["game"] = gameName(g);
  j["kind"] = isInterval(g) ? "interval" : "finite";

  if (auto view = intervalView(g)) {
    const GameClass cls = classify(asInterval(*view));
    j["class"] = {{"externalities", toString(cls.externalities)},
                  {"differences", toString(cls.differences)},
                  {"summary", cls.summary()}};
  }
  const EquilibriumSet nash = nashEquilibria(g, c.grid);
  Json nj = Json::array();
  for (const auto& p : nash.profiles)
    nj.push_back({{"profile", profileJson(p)},
                  {"payoffs", Json::array({payoff(g, 0, p[0], p[1]), payoff(g, 1, p[1], p[0])})}});
  j["nash"] = nj;
  j["nash_complete"] = nash.complete;
  if (!nash.caveat.empty()) j["nash_caveat"] = nash.caveat;

  for (int i = 0; i < 2; ++i) {
    Json pj;
    pj["player"] = i + 1;
    const UndominatedSet u = undominatedSet(g, i, c.grid);
    if (isInterval(g))
      pj["undominated"] = intervalsJson(u.intervals);
    else
      pj["undominated_supports"] = supportsJson(asFinite(g), i, u.supports);
    const MinmaxResult mu = undominatedMinmax(g, i, c.grid);
    pj["undominated_minmax"] = {{"value", mu.value}, {"opponent", strategyToJson(mu.opponent)}};
    const MinmaxResult mt = biasedBeliefMinmax(g, i, c.grid);
    pj["biased_belief_minmax"] = {{"value", mt.value}, {"opponent", strategyToJson(mt.opponent)}};
    const StackelbergResult st = stackelberg(g, i, c.grid);
    pj["stackelberg"] = {{"leader", strategyToJson(st.leader)},
                         {"follower", strategyToJson(st.follower)},
                         {"leader_payoff", st.payoff}};
    if (!st.caveat.empty()) pj["stackelberg"]["caveat"] = st.caveat;
    j["players"].push_back(pj);
  }
  const ZeroSumResult zs = zeroSumCheck(g);
  j["zero_sum"] = {{"is_constant_sum", zs.isZeroSum}, {"constant", zs.constant}, {"value1", zs.value1}};
  Json dom = Json::array();
  for (const auto& d : dominantStrategies(g))
    dom.push_back({{"player", d.player + 1}, {"strategy", strategyToJson(d.strategy)}});
  j["dominant_strategies"] = dom;

  if (!c.out.empty()) m.outputs.push_back(outPath(c, "analysis.json"));
  j["manifest"] = m.toJson();
  emit(c, "analysis.json", j.dump(2) + "\n");
  return kExitHolds;
}

int cmdRegion(const std::string& path, const Common& c) {
  const Game g = loadGame(path);
  std::vector<std::string> formats;
  if (c.format.empty())
    formats = {"csv", "svg"};
  else
    formats = {c.format};
  if (c.out.empty() && formats.size() > 1)
    throw ValidationError("region writes several files; give --out DIR or a single --format");

  MembershipContext ctx = membershipContext(g, c.grid, Exec::Parallel);
  RegionRaster r = rasterizeRegion(ctx, Exec::Parallel);
  addMarkers(r, g);

  RunManifest m{"region", path, "", gameParams(g), c.grid, c.seed, "", {}};
  if (!c.out.empty())
    for (const auto& f : formats) m.outputs.push_back(outPath(c, "region." + f));
  for (const auto& f : formats) {
    std::string text;
    if (f == "csv") {
      text = rasterCsv(r, m);
    } else if (f == "svg") {
      std::ostringstream title;
      title << gameName(g) << " (" << toString(ctx.cls.differences) << "), " << r.resolution << "x" << r.resolution;
      text = rasterSvg(r, m, title.str());
    } else {
      Json j = rasterSummary(r);
      j["class"] = toString(ctx.cls.differences);
      j["undominated_minmax"] = Json::array({ctx.MU[0], ctx.MU[1]});
      j["biased_belief_minmax"] = Json::array({ctx.Mtilde[0], ctx.Mtilde[1]});
      j["manifest"] = m.toJson();
      text = j.dump(2) + "\n";
    }
    emit(c, "region." + f, text);
  }
  if (!c.out.empty()) std::cerr << "wrote " << formats.size() << " file(s) to " << c.out << "\n";
  return kExitHolds;
}

struct VerifyArgs {
  std::string claim;
  std::optional<double> p;
  std::string family;
  bool allowNonMonotone = false;
  std::string replay;
};

int finishVerify(const Game& g, const Configuration& conf, const VerificationReport& rep, const DeviationFamily& fam,
                 bool allowNonMonotone, RunManifest m, const Common& c) {
  Json j = reportToJson(g, conf, rep, fam, c.grid);
  j["allow_non_monotone"] = allowNonMonotone;
  if (!c.out.empty()) m.outputs.push_back(outPath(c, "report.json"));
  j["manifest"] = m.toJson();
  emit(c, "report.json", j.dump(2) + "\n");
  std::cerr << toString(rep.claim) << (rep.p ? " p=" + formatNumber(*rep.p) : "") << ": "
            << (rep.holds ? "holds_on_family" : "refuted");
  if (rep.counterexample) {
    const auto& cx = *rep.counterexample;
    std::cerr << " (player " << cx.deviator + 1 << " deviates to " << describe(cx.belief).substr(0, 60)
              << ", payoff " << formatNumber(cx.deviatorPayoff) << " > " << formatNumber(cx.incumbentPayoff) << ")";
  }
  std::cerr << "\n";
  for (const auto& v : rep.guardViolations) std::cerr << "guard: " << v << "\n";
  if (!rep.guardViolations.empty()) return kExitError;
  return rep.holds ? kExitHolds : kExitRefuted;
}

VerificationReport runVerify(const Game& g, const Configuration& conf, Claim claim, const DeviationFamily& fam,
                             std::optional<double> p, bool allowNonMonotone, int grid) {
  VerifyOptions opt;
  opt.allowNonMonotone = allowNonMonotone;
  opt.grid = grid;
  return p ? verifyP(g, conf, claim, fam, *p, opt) : verify(g, conf, claim, fam, opt);
}

int cmdReplay(const std::string& path, Common c) {
  const Json rep = readJsonFile(path);
  if (rep.value("schema_version", 0) != kSchemaVersion) throw SchemaError(path + ": unsupported schema_version");
  if (!rep.contains("configuration") || !rep.contains("family") || !rep.contains("claim"))
    throw SchemaError(path + ": not a verification report");
  const ConfigFile cf = configFromJson(rep["configuration"], path + ".configuration", ".");
  const DeviationFamily fam = familyFromJson(cf.game, rep["family"], path + ".family");
  const Claim claim = parseClaim(rep["claim"].get<std::string>());
  std::optional<double> p;
  if (rep.contains("p")) p = rep["p"].get<double>();
  c.grid = rep.value("grid", kDefaultGrid);
  c.seed = fam.seed;
  const bool allowNM = rep.value("allow_non_monotone", false);

  const VerificationReport now = runVerify(cf.game, cf.config, claim, fam, p, allowNM, c.grid);
  const std::string recorded = rep.value("status", "");
  const std::string status = now.holds ? "holds_on_family" : "refuted";
  if (recorded != status) {
    std::cerr << "replay mismatch: recorded " << recorded << ", recomputed " << status << "\n";
    return kExitError;
  }
  // The recorded counterexample must still beat the incumbent on its own.
  if (rep.contains("counterexample") && !rep["counterexample"].is_null()) {
    const Json& cj = rep["counterexample"];
    const int dev = cj["deviator"].get<int>() - 1;
    const BiasedBelief b = beliefFromJson(cf.game, dev, cj["belief"], path + ".counterexample.belief");
    const DeviationResult dr = evaluateDeviation(cf.game, cf.config, dev, b, p.value_or(1.0), c.grid);
    double best = -INFINITY;
    for (double gain : dr.gains) best = std::max(best, gain);
    if (!(best > VerifyOptions{}.tolerance)) {
      std::cerr << "replay mismatch: recorded counterexample no longer gains\n";
      return kExitError;
    }
  }
  RunManifest m{"verify --replay", "", path, gameParams(cf.game), c.grid, c.seed, fam.describe(), {}};
  return finishVerify(cf.game, cf.config, now, fam, allowNM, m, c);
}

int cmdVerify(const std::string& path, const VerifyArgs& a, const Common& c) {
  if (!a.replay.empty()) return cmdReplay(a.replay, c);
  if (path.empty()) throw ValidationError("verify needs a configuration file or --replay REPORT");
  const ConfigFile cf = loadConfig(path);
  Claim claim;
  if (!a.claim.empty())
    claim = parseClaim(a.claim);
  else if (cf.claim)
    claim = *cf.claim;
  else
    throw ValidationError("no claim given; pass --claim or set \"claim\" in the configuration");
  const std::optional<double> p = a.p ? a.p : cf.p;
  if (p && !(*p > 0.0 && *p <= 1.0)) throw DomainError("p must lie in (0, 1]");
  const bool allowNM = a.allowNonMonotone || cf.allowNonMonotone;
  const DeviationFamily fam = parseFamily(a.family, c.seed);
  const VerificationReport rep = runVerify(cf.game, cf.config, claim, fam, p, allowNM, c.grid);
  RunManifest m{"verify", cf.gamePath, path, gameParams(cf.game), c.grid, c.seed, fam.describe(), {}};
  return finishVerify(cf.game, cf.config, rep, fam, allowNM, m, c);
}

struct ConstructArgs {
  std::string method;
  std::vector<double> target;
  int leader = 1;
  double p = 1.0;
};

Profile parseTarget(const Game& g, const std::vector<double>& t) {
  if (t.size() != 2) throw ValidationError("--target needs two values s1,s2");
  if (isInterval(g)) return {Strategy(t[0]), Strategy(t[1])};
  const auto& fg = asFinite(g);
  for (int i = 0; i < 2; ++i)
    if (t[i] != std::floor(t[i]) || t[i] < 1 || t[i] > fg.n(i))
      throw ValidationError("finite targets are 1-based action indices");
  return {Strategy::pure(fg.n(0), static_cast<int>(t[0]) - 1), Strategy::pure(fg.n(1), static_cast<int>(t[1]) - 1)};
}

int cmdConstruct(const std::string& path, const ConstructArgs& a, const Common& c) {
  const Game g = loadGame(path);
  Forged f;
  const std::string& mth = a.method;
  if (a.leader != 1 && a.leader != 2) throw ValidationError("--leader must be 1 or 2");
  if (mth == "stackelberg") {
    f = forgeStackelbergStubborn(g, a.leader - 1);
  } else if (mth == "stackelberg-p") {
    f = forgeStackelbergPartial(g, a.leader - 1, a.p);
  } else {
    const Profile t = parseTarget(g, a.target);
    if (mth == "complements")
      f = forgeComplements(g, t);
    else if (mth == "substitutes")
      f = forgeSubstitutes(g, t);
    else if (mth == "opposites")
      f = forgeOpposites(g, t);
    else if (mth == "monotone")
      f = forgeMonotone(g, t);
    else if (mth == "folk")
      f = isInterval(g) ? forgeFolkInterval(g, t) : forgeFolkFinite(g, t);
    else if (mth == "nash") {
      const NashBBE nb = nashAsBBE(g, t);
      f.config = nb.config;
      f.construction = "nash_blind";
      f.strongClaim = nb.strong;
    } else
      throw ValidationError("unknown method '" + mth + "'");
  }
  RunManifest m{"construct", path, "", gameParams(g), c.grid, c.seed, "", {}};
  if (!c.out.empty()) m.outputs.push_back(outPath(c, "config.json"));
  std::string gameRef = fs::absolute(path).lexically_normal().string();
  if (!c.out.empty()) gameRef = fs::relative(fs::absolute(path), fs::absolute(c.out)).string();
  Json j = forgedToJson(g, f, gameRef);
  if (mth == "stackelberg-p") j["p"] = a.p;
  j["manifest"] = m.toJson();
  emit(c, "config.json", j.dump(2) + "\n");
  return kExitHolds;
}

int cmdExamples(const std::string& name, bool list, const Common& c) {
  std::vector<LibraryEntry> entries;
  if (name.empty())
    entries = exampleLibrary();
  else
    entries = {exampleByName(name)};
  if (list) {
    for (const auto& e : entries) std::cout << e.name << "  " << e.summary << "\n";
    return kExitHolds;
  }
  DeviationFamily fam;
  fam.seed = c.seed;
  VerifyOptions opt;
  opt.grid = c.grid;
  int failed = 0;
  Json all = Json::array();
  for (const auto& e : entries) {
    const ExampleOutcome o = runExample(e, fam, opt);
    std::cout << (o.pass ? "PASS " : "FAIL ") << e.name << (e.nonMonotone ? " [non-monotone]" : "") << ": "
              << o.detail << "\n";
    if (!o.pass) ++failed;
    Json j = {{"name", e.name}, {"pass", o.pass}, {"detail", o.detail}};
    if (o.report) j["report"] = reportToJson(*e.game, *o.config, *o.report, fam, c.grid);
    all.push_back(j);
  }
  if (!c.out.empty()) {
    RunManifest m{"examples", "", "", {}, c.grid, c.seed, fam.describe(), {outPath(c, "examples.json")}};
    Json doc = {{"schema_version", kSchemaVersion}, {"examples", all}, {"manifest", m.toJson()}};
    writeTextFile(outPath(c, "examples.json"), doc.dump(2) + "\n");
  }
  std::cout << entries.size() - failed << "/" << entries.size() << " examples passed\n";
  return failed ? kExitError : kExitHolds;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Biased-belief equilibrium analysis for two-player games"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  Common common;
  auto addCommon = [&](CLI::App* s, int defaultGrid) {
    common.grid = defaultGrid;
    s->add_option("--grid", common.grid, "Grid resolution (solver grid; raster size for region)")
        ->check(CLI::Range(2, 100000));
    s->add_option("--seed", common.seed, "Seed for the randomized deviation family");
    s->add_option("--out", common.out, "Output directory (default: stdout)");
  };

  std::string gamePath, configPath, exampleName;
  auto* analyze = app.add_subcommand("analyze", "Class, Nash set, undominated sets, minmaxes, Stackelberg");
  analyze->add_option("game", gamePath, "Game JSON file")->required();
  addCommon(analyze, kDefaultGrid);
  analyze->add_option("--format", common.format, "Output format")->check(CLI::IsMember({"json"}));

  auto* region = app.add_subcommand("region", "Rasterize the set of outcomes supported by monotone beliefs");
  region->add_option("game", gamePath, "Game JSON file")->required();
  region->add_option("--format", common.format, "Output format (default: csv and svg)")
      ->check(CLI::IsMember({"csv", "json", "svg"}));

  VerifyArgs va;
  auto* ver = app.add_subcommand("verify", "Check a configuration against a deviation family");
  ver->add_option("config", configPath, "Configuration JSON file");
  ver->add_option("--claim", va.claim, "weak, bbe or strong (default: the file's claim)")
      ->check(CLI::IsMember({"weak", "bbe", "strong"}));
  ver->add_option("--p", va.p, "Probability that a deviation is observed")->check(CLI::Range(0.0, 1.0));
  ver->add_option("--family", va.family, "Deviation family, e.g. blind=101,pw=64,simplex=10,identity=1");
  ver->add_flag("--allow-non-monotone", va.allowNonMonotone, "Accept non-monotone beliefs for bbe/strong claims");
  ver->add_option("--replay", va.replay, "Recompute a report JSON and check it reproduces");
  ver->add_option("--format", common.format, "Output format")->check(CLI::IsMember({"json"}));

  ConstructArgs ca;
  auto* con = app.add_subcommand("construct", "Forge a configuration supporting a target");
  con->add_option("game", gamePath, "Game JSON file")->required();
  con->add_option("--method", ca.method, "complements, substitutes, opposites, monotone, folk, nash, "
                                         "stackelberg or stackelberg-p")
      ->required();
  con->add_option("--target", ca.target, "Target profile s1,s2 (finite games: 1-based action indices)")
      ->delimiter(',');
  con->add_option("--leader", ca.leader, "Leader for the Stackelberg constructions (1 or 2)");
  con->add_option("--p", ca.p, "Observation probability for stackelberg-p")->check(CLI::Range(0.0, 1.0));
  con->add_option("--format", common.format, "Output format")->check(CLI::IsMember({"json"}));

  bool list = false;
  auto* ex = app.add_subcommand("examples", "Run the worked-example regression");
  ex->add_option("name", exampleName, "Run a single example");
  ex->add_flag("--list", list, "List examples without running them");

  // Each subcommand gets its own defaults; region uses a coarser raster.
  addCommon(region, 200);
  addCommon(ver, kDefaultGrid);
  addCommon(con, kDefaultGrid);
  addCommon(ex, kDefaultGrid);
  common.grid = kDefaultGrid;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitError;
  }

  try {
    if (*analyze) return cmdAnalyze(gamePath, common);
    if (*region) {
      if (region->count("--grid") == 0) common.grid = 200;
      return cmdRegion(gamePath, common);
    }
    if (*ver) return cmdVerify(configPath, va, common);
    if (*con) return cmdConstruct(gamePath, ca, common);
    if (*ex) return cmdExamples(exampleName, list, common);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
