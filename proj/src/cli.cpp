#include "conelab/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>

#include "conelab/chamberwalk.hpp"
#include "conelab/conestruct.hpp"
#include "conelab/errors.hpp"
#include "conelab/groupact.hpp"
#include "conelab/rayclass.hpp"
#include "conelab/varmodel.hpp"

namespace conelab {

std::vector<VectorQ> parseRayList(const std::string& text) {
  std::vector<VectorQ> rays;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(';', start);
    if (end == std::string::npos) end = text.size();
    std::string part = text.substr(start, end - start);
    if (part.find_first_not_of(" \t") != std::string::npos) rays.push_back(parseVector(part));
    start = end + 1;
  }
  return rays;
}

namespace {

struct Options {
  std::string instance;
  std::string divisor;
  std::string sigma;
  long budget = 100;
  long samples = 200;
  int wordBudget = 2;
  std::string out;
  std::uint64_t seed = 1;
};

Json chamberJson(const Chamber& ch) {
  Json j;
  j["frame"] = toJson(ch.identity());
  j["path_length"] = ch.path.size();
  return j;
}

Json coneJson(const PolyCone& c) {
  return {{"rays", toJson(c.rays())},
          {"lineality", toJson(c.lineality())},
          {"inequalities", toJson(c.inequalities())},
          {"equalities", toJson(c.equalities())},
          {"dimension", c.dimension()}};
}

VectorQ divisorOrDefault(const VarietyInstance& inst, const Options& o) {
  if (!o.divisor.empty()) {
    VectorQ d = parseVector(o.divisor);
    if (d.size() != inst.rank())
      throw InputError("--divisor has " + std::to_string(d.size()) + " entries, rank is " + std::to_string(inst.rank()));
    return d;
  }
  VectorQ x = seedChamber(inst).nef.relativeInteriorPoint();
  return inst.isRelative ? x : liftToAbsolute(inst, x).liftedClass;
}

PolyCone sigmaOrDefault(const VarietyInstance& inst, const Options& o) {
  std::string text = o.sigma;
  if (text.empty() && inst.metadata.contains("default_sigma")) text = inst.metadata["default_sigma"].get<std::string>();
  if (text.empty()) throw InputError("--sigma is required for this instance");
  auto rays = parseRayList(text);
  for (const auto& r : rays)
    if (r.size() != inst.rank()) throw InputError("--sigma ray has the wrong dimension");
  return PolyCone::fromGenerators(rays, inst.rank());
}

struct Run {
  Json verdicts = Json::object();
  Json completeness = Json::array();
  int code = kExitOk;
  std::optional<std::string> trippedGuard;
};

Run cmdValidate(const std::string& text, const std::string& label) {
  Run r;
  VarietyInstance inst = parseInstance(text, label);
  auto violations = validateInstance(inst);
  r.verdicts["valid"] = violations.empty();
  r.verdicts["violations"] = violations;
  r.verdicts["rank"] = inst.rank();
  r.verdicts["reducible_fibres"] = fibralDecompositionPairs(inst).size();
  Json gens = Json::array();
  for (const auto& g : inst.groupGenerators) {
    Json e = {{"label", g.label}};
    try {
      e["translation"] = toJson(quotientTranslation(inst, g).translation);
    } catch (const InputError& ex) {
      e["translation"] = nullptr;
      e["note"] = ex.what();
    }
    gens.push_back(e);
  }
  r.verdicts["group_generators"] = gens;
  if (!violations.empty()) r.code = kExitVerdict;
  return r;
}

Run cmdCones(const VarietyInstance& inst, const Options& o) {
  Run r;
  auto mov = relativeMovableCone(inst);
  r.verdicts["movable"] = {{"base", coneJson(mov.base)}, {"strict", toJson(mov.strict)}};
  auto pred = relativeEffectivePredicate(inst);
  r.verdicts["effective"] = {{"strict", toJson(pred.strictPiece.strict)},
                             {"ray_generators", toJson(pred.rayPiece.allGenerators())},
                             {"includes_zero", pred.includesZero}};
  r.verdicts["trivial_subspace"] = toJson(trivialSubspace(inst).basis);
  r.verdicts["slice_eta"] = toJson(sliceCoordinates(inst).eta);
  if (!o.divisor.empty()) {
    VectorQ x = divisorOrDefault(inst, o);
    auto m = effectiveMembership(pred, x);
    r.verdicts["divisor"] = {{"class", toJson(x)},
                             {"movable", membership(mov, x, MembershipMode::Closed)},
                             {"effective", m.member},
                             {"piece", effectivePieceName(m.piece)}};
  }
  return r;
}

Run cmdMakeNef(const VarietyInstance& inst, const Options& o, const Guards& guards) {
  Run r;
  VectorQ d = divisorOrDefault(inst, o);
  auto pre = movablePrecheck(inst, d);
  r.verdicts["divisor"] = toJson(d);
  r.verdicts["precheck"] = pre.ok;
  if (!pre.ok) {
    r.verdicts["precheck_witness"] = toJson(*pre.witness);
    r.code = kExitVerdict;
    return r;
  }
  auto res = makeNef(inst, d, guards);
  r.verdicts["path"] = toJson(res.path);
  r.verdicts["path_length"] = res.path.size();
  r.verdicts["chamber"] = chamberJson(res.chamber);
  r.verdicts["contains_divisor"] = res.chamber.nef.contains(d);
  return r;
}

Run cmdChambers(const VarietyInstance& inst, const Options& o, const Guards& guards) {
  Run r;
  PolyCone sigma = sigmaOrDefault(inst, o);
  auto en = enumerateChambers(inst, sigma, guards);
  Json list = Json::array();
  for (const auto& ch : en.chambers) list.push_back(chamberJson(ch));
  r.verdicts["sigma"] = toJson(sigma.rays());
  r.verdicts["count"] = en.chambers.size();
  r.verdicts["visited"] = en.visited;
  r.verdicts["chambers"] = list;
  return r;
}

Run cmdOrbits(const VarietyInstance& inst, const Options& o) {
  Run r;
  auto en = enumerateUpToGroup(inst, static_cast<std::size_t>(o.budget), o.wordBudget);
  Json reps = Json::array();
  for (const auto& ch : en.representatives) reps.push_back(chamberJson(ch));
  Json visits = Json::array();
  for (const auto& v : en.visits)
    visits.push_back({{"chamber", v.chamberKey}, {"representative", v.representative}, {"element", formatWord(inst, v.word)}});
  r.verdicts["representatives"] = reps;
  r.verdicts["count"] = en.representatives.size();
  r.verdicts["visits"] = visits;
  r.verdicts["complete"] = en.complete;
  if (!en.complete) r.completeness.push_back("orbit frontier still open at budget " + std::to_string(o.budget));
  if (!en.reductionExact)
    r.completeness.push_back("orbit reduction minimised over words up to length " + std::to_string(o.wordBudget) + " only");
  return r;
}

Run cmdFundamental(const VarietyInstance& inst, const Options& o, const Guards& guards) {
  Run r;
  KReport k = buildK(inst);
  Json ranges = Json::array();
  for (const auto& [lo, hi] : k.fibralRanges) ranges.push_back({toJson(lo), toJson(hi)});
  r.verdicts["K"] = {{"cone", coneJson(k.cone)}, {"fibral_ranges", ranges}, {"boundedness_certificate", true}};
  Guards uGuards = guards;
  uGuards.chambers = std::min(guards.chambers, o.budget);
  bool uVerified = false;
  try {
    UReport u = buildU(inst, std::nullopt, uGuards);
    Json wit = Json::array();
    for (const auto& w : u.witnesses)
      wit.push_back({{"chamber", w.chamberKey},
                     {"element", formatWord(inst, w.word)},
                     {"u", toJson(w.u)},
                     {"image", toJson(w.image)},
                     {"verified", w.verified}});
    Json cover = Json::array();
    for (const auto& ch : u.covering) cover.push_back(chamberJson(ch));
    r.verdicts["U"] = {{"cone", coneJson(u.cone)}, {"covering_chambers", cover}, {"witnesses", wit}};
    uVerified = u.allVerified();
  } catch (const GuardTripped& e) {
    r.verdicts["U"] = {{"error", e.what()}};
    r.completeness.push_back(std::string("chambers covering U not enumerated: ") + e.what());
    r.trippedGuard = e.guard();
    uVerified = true;
  }
  auto fd = fundamentalDomainCheck(inst, k.cone, static_cast<std::size_t>(o.samples), o.wordBudget, o.seed);
  r.verdicts["fundamental_domain"] = {
      {"coverage", {{"samples", fd.coverage.samples}, {"covered", fd.coverage.covered}, {"failures", fd.coverage.failures}}},
      {"disjointness",
       {{"word_budget", fd.disjointness.wordBudget},
        {"elements_checked", fd.disjointness.elementsChecked},
        {"holds", fd.disjointness.holds},
        {"first_failure_length", fd.disjointness.firstFailureLength ? Json(*fd.disjointness.firstFailureLength) : Json()},
        {"failing_element", fd.disjointness.failingWord ? Json(*fd.disjointness.failingWord) : Json()}}},
      {"verdict", fd.verdict}};
  r.completeness.push_back("coverage is sampled (" + std::to_string(o.samples) + " points), disjointness checked up to word length " +
                           std::to_string(o.wordBudget));
  if (!fd.consistent() || !uVerified) r.code = kExitVerdict;
  else if (r.trippedGuard) r.code = kExitGuard;
  return r;
}

Run cmdClassifyRays(const VarietyInstance& inst) {
  Run r;
  Json rays = Json::array();
  std::vector<RayRecord> records;
  bool ok = true;
  for (const auto& kr : inst.fibration.kNegativeRays) {
    RayRecord rec = recordFor(kr);
    records.push_back(rec);
    auto c = classifyRay(inst, rec);
    ok = ok && c.consistent;
    rays.push_back({{"curve", toJson(rec.curve)},
                    {"declared", declaredTypeName(rec.declared)},
                    {"coarse", coarseClassName(c.coarse)},
                    {"k_pairing", toJson(c.kPairing)},
                    {"consistent", c.consistent},
                    {"issues", c.issues}});
  }
  r.verdicts["rays"] = rays;
  auto face = kTrivialFace(inst);
  r.verdicts["k_trivial_face"] = {{"verdict", face.equal ? "equal" : "unequal"},
                                  {"is_face", face.isFace},
                                  {"witness", face.witness ? toJson(*face.witness) : Json()}};
  auto tf = typeFinitenessCheck(inst, records);
  Json pairs = Json::array();
  for (const auto& [a, b] : tf.flaggedPairs) pairs.push_back({a, b});
  r.verdicts["type_finiteness"] = {{"passes", tf.passes()},
                                   {"flagged_pairs", pairs},
                                   {"independent_divisors", tf.independentDivisors},
                                   {"bound", tf.bound}};
  if (!ok || !face.equal || !tf.passes()) r.code = kExitVerdict;
  return r;
}

Run cmdLift(const VarietyInstance& inst, const Options& o) {
  Run r;
  VectorQ x = divisorOrDefault(inst, o);
  auto rep = liftToAbsolute(inst, x);
  Json nu = Json::array();
  for (const auto& v : rep.nu) nu.push_back(toJson(Rational(v)));
  r.verdicts["input"] = toJson(rep.inputClass);
  r.verdicts["lifted"] = toJson(rep.liftedClass);
  r.verdicts["m"] = toJson(Rational(rep.m));
  r.verdicts["nu"] = nu;
  return r;
}

}  // namespace

int runCommand(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact cone and chamber computations for fibred varieties", "conelab"};
  app.require_subcommand(1);
  Options o;

  struct CommandInfo {
    const char* name;
    const char* help;
    bool divisor, sigma, budget, samples, words;
  };
  const CommandInfo commands[] = {
      {"validate", "parse and validate an instance", false, false, false, false, false},
      {"cones", "relative movable and effective cone descriptions", true, false, false, false, false},
      {"make-nef", "flop a divisor into its nef chamber", true, false, false, false, false},
      {"chambers", "enumerate the chambers meeting a cone Sigma", false, true, false, false, false},
      {"orbits", "enumerate chambers up to the group", false, false, true, false, true},
      {"fundamental", "build K and U and check the fundamental-domain predicates", false, false, true, true, true},
      {"classify-rays", "classify the K-negative rays and check the K-trivial face", false, false, false, false, false},
      {"lift", "lift a relative movable class to an absolute one", true, false, false, false, false},
  };
  for (const auto& s : commands) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    sub->add_option("--instance", o.instance, "bundled instance name or JSON path")->required();
    sub->add_option("--out", o.out, "write the report here instead of stdout");
    sub->add_option("--seed", o.seed, "sampling seed");
    if (s.divisor) sub->add_option("--divisor", o.divisor, "divisor class as csv rationals");
    if (s.sigma) sub->add_option("--sigma", o.sigma, "cone generators \"r1;r2;...\"");
    if (s.budget) sub->add_option("--budget", o.budget, "chambers expanded or visited")->check(CLI::PositiveNumber);
    if (s.samples) sub->add_option("--samples", o.samples, "coverage samples")->check(CLI::NonNegativeNumber);
    if (s.words) sub->add_option("--word-budget", o.wordBudget, "maximum word length")->check(CLI::NonNegativeNumber);
  }

  std::vector<std::string> argvStore = {"conelab"};
  argvStore.insert(argvStore.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argvStore) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    err << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  const auto t0 = std::chrono::steady_clock::now();
  Json report;
  report["command"] = command;
  report["instance"] = o.instance;
  Run run;
  Guards guards;
  std::optional<std::string> trippedGuard;
  try {
    guards = Guards::fromEnvironment();
    const std::string text = readInstanceText(o.instance);
    if (command == "validate") {
      run = cmdValidate(text, o.instance);
    } else {
      VarietyInstance inst = loadAndValidate(text, o.instance);
      if (command == "cones") run = cmdCones(inst, o);
      else if (command == "make-nef") run = cmdMakeNef(inst, o, guards);
      else if (command == "chambers") run = cmdChambers(inst, o, guards);
      else if (command == "orbits") run = cmdOrbits(inst, o);
      else if (command == "fundamental") run = cmdFundamental(inst, o, guards);
      else if (command == "classify-rays") run = cmdClassifyRays(inst);
      else run = cmdLift(inst, o);
    }
  } catch (const ValidationError& e) {
    run.verdicts = {{"valid", false}, {"violations", e.violations()}};
    run.code = kExitVerdict;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const GuardTripped& e) {
    run.verdicts["error"] = e.what();
    trippedGuard = e.guard();
    run.code = kExitGuard;
  } catch (const PreconditionError& e) {
    run.verdicts["error"] = e.what();
    run.code = kExitVerdict;
  } catch (const SearchExhausted& e) {
    run.verdicts["error"] = e.what();
    run.completeness.push_back(e.what());
    run.code = kExitVerdict;
  } catch (const std::logic_error& e) {
    run.verdicts["error"] = e.what();
    run.code = kExitVerdict;
  }
  const auto t1 = std::chrono::steady_clock::now();

  if (run.trippedGuard) trippedGuard = run.trippedGuard;
  report["verdicts"] = run.verdicts;
  report["guards"] = {{"flops", guards.flops},
                      {"chambers", guards.chambers},
                      {"tripped", trippedGuard.has_value()},
                      {"tripped_guard", trippedGuard ? Json(*trippedGuard) : Json()}};
  report["completeness"] = run.completeness;
  report["timings_ms"] = std::chrono::duration<double, std::milli>(t1 - t0).count();

  const std::string body = report.dump(2) + "\n";
  if (o.out.empty()) {
    out << body;
  } else {
    std::ofstream f(o.out);
    if (!f) {
      err << "error: cannot write " << o.out << "\n";
      return kExitUsage;
    }
    f << body;
  }
  return run.code;
}

}  // namespace conelab
