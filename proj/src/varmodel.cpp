#include "conelab/varmodel.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "conelab/errors.hpp"
#include "conelab/groupact.hpp"
#include "conelab/polycone.hpp"

namespace conelab {

namespace detail {
struct BundledInstance {
  const char* name;
  const char* text;
};
extern const BundledInstance kBundledInstances[];
extern const std::size_t kBundledInstanceCount;
}  // namespace detail

std::string moriTypeName(MoriType t) {
  switch (t) {
    case MoriType::Fibre: return "fibre";
    case MoriType::Type1: return "1";
    case MoriType::Type2: return "2";
    case MoriType::Type3: return "3";
    case MoriType::Type4: return "4";
    case MoriType::Type5: return "5";
  }
  return "fibre";
}

MatrixQ FlopRule::mapFor(const VectorQ& wall) const {
  const Index n = wall.size();
  if (reflectionForm) {
    const MatrixQ& q = *reflectionForm;
    VectorQ qc = q * wall;
    Rational cc = dot(wall, qc);
    if (cc.isZero()) throw InputError("reflection form is isotropic on wall " + formatVector(wall));
    MatrixQ t = identity(n);
    Rational s = Rational(2) / cc;
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) t(i, j) -= s * wall(i) * qc(j);
    return t;
  }
  VectorQ key = primitive(wall);
  for (const auto& [w, m] : explicitMaps)
    if (sameVector(primitive(w), key)) return m;
  throw InputError("flop rule has no map for wall " + formatVector(wall));
}

// --- parsing ----------------------------------------------------------------

namespace {

const std::set<std::string> kTopLevelKeys = {
    "rank",          "divisor_basis",     "curve_basis",        "pairing",          "canonical_class",
    "iitaka_dim",    "fibre_class",       "fibral_classes",     "vertical_divisors", "partition",
    "multiplicities_m", "pullback_coeffs_mu", "ample_pullbacks", "k_negative_rays",  "flop_rule",
    "seed_chamber",  "group_generators",  "metadata",           "is_relative"};

const Json& require(const Json& doc, const std::string& key) {
  if (!doc.contains(key)) throw ParseError("/" + key, "missing required key");
  return doc.at(key);
}

void rejectUnknownKeys(const Json& obj, const std::set<std::string>& allowed, const std::string& path) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) throw ParseError(path + "/" + it.key(), "unknown key");
}

std::vector<std::string> stringList(const Json& j, const std::string& path, Index expected) {
  if (!j.is_array()) throw ParseError(path, "expected an array of strings");
  if (static_cast<Index>(j.size()) != expected)
    throw ParseError(path, "expected " + std::to_string(expected) + " labels, found " + std::to_string(j.size()));
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_string()) throw ParseError(path + "/" + std::to_string(i), "expected a string");
    out.push_back(j[i].get<std::string>());
  }
  return out;
}

std::vector<std::vector<std::size_t>> indexSets(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path, "expected an array of index arrays");
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = path + "/" + std::to_string(i);
    if (!j[i].is_array()) throw ParseError(p, "expected an array of indices");
    std::vector<std::size_t> set;
    for (std::size_t k = 0; k < j[i].size(); ++k) {
      if (!j[i][k].is_number_unsigned())
        throw ParseError(p + "/" + std::to_string(k), "expected a nonnegative integer index");
      set.push_back(j[i][k].get<std::size_t>());
    }
    out.push_back(set);
  }
  return out;
}

MoriType parseMoriType(const Json& j, const std::string& path) {
  if (j.is_string() && j.get<std::string>() == "fibre") return MoriType::Fibre;
  if (j.is_number_integer()) {
    switch (j.get<int>()) {
      case 1: return MoriType::Type1;
      case 2: return MoriType::Type2;
      case 3: return MoriType::Type3;
      case 4: return MoriType::Type4;
      case 5: return MoriType::Type5;
      default: break;
    }
  }
  throw ParseError(path, "mori_type must be 1..5 or \"fibre\"");
}

GroupElement parseGroupElement(const Json& j, const std::string& path, Index rank) {
  GroupElement g;
  if (j.is_object()) {
    rejectUnknownKeys(j, {"matrix", "label", "provenance"}, path);
    g.matrix = matrixFromJson(require(j, "matrix"), path + "/matrix", rank, rank);
    if (j.contains("label")) g.label = j.at("label").get<std::string>();
    if (j.contains("provenance")) g.provenance = j.at("provenance").get<std::string>();
  } else {
    g.matrix = matrixFromJson(j, path, rank, rank);
  }
  return g;
}

}  // namespace

VarietyInstance parseInstance(const std::string& text, const std::string& label) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError("", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("", "instance must be a JSON object");
  rejectUnknownKeys(doc, kTopLevelKeys, "");

  VarietyInstance inst;
  inst.label = label;
  try {
    const Json& rankJ = require(doc, "rank");
    if (!rankJ.is_number_integer() || rankJ.get<long>() <= 0) throw ParseError("/rank", "must be a positive integer");
    const Index r = rankJ.get<Index>();
    inst.lattice.rank = r;
    inst.lattice.divisorBasisLabels = stringList(require(doc, "divisor_basis"), "/divisor_basis", r);
    inst.lattice.curveBasisLabels = stringList(require(doc, "curve_basis"), "/curve_basis", r);
    inst.lattice.pairing = matrixFromJson(require(doc, "pairing"), "/pairing", r, r);
    inst.canonicalClass = vectorFromJson(require(doc, "canonical_class"), "/canonical_class", r);
    if (doc.contains("iitaka_dim")) {
      if (!doc["iitaka_dim"].is_number_integer()) throw ParseError("/iitaka_dim", "must be an integer");
      inst.iitakaDim = doc["iitaka_dim"].get<int>();
    }
    const Json& rel = require(doc, "is_relative");
    if (!rel.is_boolean()) throw ParseError("/is_relative", "must be a boolean");
    inst.isRelative = rel.get<bool>();

    FibrationData& fib = inst.fibration;
    fib.fibre = vectorFromJson(require(doc, "fibre_class"), "/fibre_class", r);
    auto listOr = [&](const char* key) { return doc.contains(key) ? doc.at(key) : Json::array(); };
    fib.fibral = vectorListFromJson(listOr("fibral_classes"), "/fibral_classes", r);
    fib.vertical = vectorListFromJson(listOr("vertical_divisors"), "/vertical_divisors", r);
    fib.partition = indexSets(listOr("partition"), "/partition");
    const Json ms = listOr("multiplicities_m");
    if (!ms.is_array()) throw ParseError("/multiplicities_m", "expected an array");
    for (std::size_t i = 0; i < ms.size(); ++i) {
      Rational m = rationalFromJson(ms[i], "/multiplicities_m/" + std::to_string(i));
      if (!m.isInteger()) throw ParseError("/multiplicities_m/" + std::to_string(i), "must be an integer");
      fib.m.push_back(m.num());
    }
    VectorQ mu = vectorFromJson(listOr("pullback_coeffs_mu"), "/pullback_coeffs_mu");
    for (Index i = 0; i < mu.size(); ++i) fib.mu.push_back(mu(i));
    fib.amplePullbacks = vectorListFromJson(listOr("ample_pullbacks"), "/ample_pullbacks", r);

    const Json kneg = listOr("k_negative_rays");
    if (!kneg.is_array()) throw ParseError("/k_negative_rays", "expected an array");
    for (std::size_t i = 0; i < kneg.size(); ++i) {
      const std::string p = "/k_negative_rays/" + std::to_string(i);
      if (!kneg[i].is_object()) throw ParseError(p, "expected an object");
      rejectUnknownKeys(kneg[i], {"curve", "mori_type", "exceptional_divisor"}, p);
      KNegativeRay ray;
      ray.curve = vectorFromJson(require(kneg[i], "curve"), p + "/curve", r);
      ray.type = parseMoriType(require(kneg[i], "mori_type"), p + "/mori_type");
      if (kneg[i].contains("exceptional_divisor"))
        ray.exceptionalDivisor = vectorFromJson(kneg[i]["exceptional_divisor"], p + "/exceptional_divisor", r);
      fib.kNegativeRays.push_back(ray);
    }

    if (doc.contains("flop_rule")) {
      const Json& fr = doc["flop_rule"];
      if (!fr.is_object()) throw ParseError("/flop_rule", "expected an object");
      rejectUnknownKeys(fr, {"reflection_form", "explicit"}, "/flop_rule");
      if (fr.contains("reflection_form") == fr.contains("explicit"))
        throw ParseError("/flop_rule", "exactly one of reflection_form or explicit is required");
      if (fr.contains("reflection_form")) {
        inst.flopRule.reflectionForm = matrixFromJson(fr["reflection_form"], "/flop_rule/reflection_form", r, r);
      } else {
        const Json& ex = fr["explicit"];
        if (!ex.is_array()) throw ParseError("/flop_rule/explicit", "expected an array");
        for (std::size_t i = 0; i < ex.size(); ++i) {
          const std::string p = "/flop_rule/explicit/" + std::to_string(i);
          rejectUnknownKeys(ex[i], {"wall", "matrix"}, p);
          inst.flopRule.explicitMaps.emplace_back(vectorFromJson(require(ex[i], "wall"), p + "/wall", r),
                                                  matrixFromJson(require(ex[i], "matrix"), p + "/matrix", r, r));
        }
      }
    }

    const Json& seed = require(doc, "seed_chamber");
    if (!seed.is_object()) throw ParseError("/seed_chamber", "expected an object");
    rejectUnknownKeys(seed, {"wall_frame", "blocks"}, "/seed_chamber");
    inst.seed.wallFrame = vectorListFromJson(require(seed, "wall_frame"), "/seed_chamber/wall_frame", r);
    if (seed.contains("blocks")) {
      inst.seed.blocks = indexSets(seed["blocks"], "/seed_chamber/blocks");
      for (std::size_t b = 0; b < inst.seed.blocks.size(); ++b)
        for (std::size_t idx : inst.seed.blocks[b])
          if (idx >= inst.seed.wallFrame.size())
            throw ParseError("/seed_chamber/blocks/" + std::to_string(b), "frame index out of range");
    } else {
      std::vector<std::size_t> all(inst.seed.wallFrame.size());
      for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
      inst.seed.blocks = {all};
    }

    const Json gens = listOr("group_generators");
    if (!gens.is_array()) throw ParseError("/group_generators", "expected an array");
    for (std::size_t i = 0; i < gens.size(); ++i) {
      GroupElement g = parseGroupElement(gens[i], "/group_generators/" + std::to_string(i), r);
      if (g.label.empty()) g.label = "g" + std::to_string(i + 1);
      inst.groupGenerators.push_back(g);
    }
    if (doc.contains("metadata")) {
      if (!doc["metadata"].is_object()) throw ParseError("/metadata", "expected an object");
      inst.metadata = doc["metadata"];
    }
  } catch (const Json::exception& e) {
    throw ParseError("", std::string("schema error: ") + e.what());
  }
  return inst;
}

// --- validation ---------------------------------------------------------------

std::vector<VectorQ> fibralGenerators(const VarietyInstance& inst, const std::vector<VectorQ>& frame) {
  std::vector<VectorQ> gens = {inst.fibration.fibre};
  gens.insert(gens.end(), inst.fibration.fibral.begin(), inst.fibration.fibral.end());
  gens.insert(gens.end(), frame.begin(), frame.end());
  return gens;
}

TrivialSubspace trivialSubspace(const VarietyInstance& inst, const std::vector<VectorQ>& frame) {
  const Index r = inst.rank();
  auto gens = fibralGenerators(inst, frame);
  TrivialSubspace t;
  std::vector<VectorQ> functionals;
  for (const auto& g : gens) functionals.push_back(inst.lattice.functional(g));
  t.basis = canonicalSpanBasis(orthogonalComplement(functionals, r), r);
  for (std::size_t i : independentSubset(gens, r)) t.fibralBasis.push_back(gens[i]);
  t.quotient = MatrixQ(static_cast<Index>(t.fibralBasis.size()), r);
  for (std::size_t j = 0; j < t.fibralBasis.size(); ++j)
    t.quotient.row(static_cast<Index>(j)) = inst.lattice.functional(t.fibralBasis[j]).transpose();
  return t;
}

TrivialSubspace trivialSubspace(const VarietyInstance& inst) { return trivialSubspace(inst, inst.seed.wallFrame); }

std::vector<std::pair<VectorQ, VectorQ>> fibralDecompositionPairs(const VarietyInstance& inst) {
  std::vector<VectorQ> classes;
  auto addUnique = [&](const VectorQ& v) {
    for (const auto& c : classes)
      if (sameVector(c, v)) return;
    classes.push_back(v);
  };
  for (const auto& c : inst.seed.wallFrame) addUnique(c);
  for (const auto& c : inst.fibration.fibral) addUnique(c);
  std::vector<std::pair<VectorQ, VectorQ>> pairs;
  for (std::size_t i = 0; i < classes.size(); ++i)
    for (std::size_t j = i + 1; j < classes.size(); ++j)
      if (sameVector(VectorQ(classes[i] + classes[j]), inst.fibration.fibre)) pairs.emplace_back(classes[i], classes[j]);
  return pairs;
}

namespace {

std::string at(std::size_t i) { return std::to_string(i + 1); }

void validateFibration(const VarietyInstance& inst, std::vector<std::string>& out) {
  const FibrationData& f = inst.fibration;
  const LatticePair& lat = inst.lattice;
  const std::size_t n = f.vertical.size();
  if (f.fibral.size() != n)
    out.push_back("fibral_classes and vertical_divisors have different lengths (" + std::to_string(f.fibral.size()) +
                  " vs " + std::to_string(n) + ")");
  if (f.m.size() != n) out.push_back("multiplicities_m has " + std::to_string(f.m.size()) + " entries, expected " + std::to_string(n));
  if (f.mu.size() != n) out.push_back("pullback_coeffs_mu has " + std::to_string(f.mu.size()) + " entries, expected " + std::to_string(n));
  if (f.fibral.size() != n || f.m.size() != n || f.mu.size() != n) return;

  std::vector<int> owner(n, -1);
  for (std::size_t p = 0; p < f.partition.size(); ++p)
    for (std::size_t i : f.partition[p]) {
      if (i >= n) {
        out.push_back("partition member " + at(p) + " refers to index " + at(i) + " out of range");
        continue;
      }
      if (owner[i] >= 0) out.push_back("partition covers each index once violated at i=" + at(i));
      owner[i] = static_cast<int>(p);
    }
  for (std::size_t i = 0; i < n; ++i)
    if (owner[i] < 0) out.push_back("partition covers each index once violated at i=" + at(i));

  for (std::size_t i = 0; i < n; ++i) {
    if (f.m[i] <= 0) out.push_back("m_i positive integer violated at i=" + at(i));
    if (f.mu[i].sign() <= 0) out.push_back("μ_i > 0 violated at i=" + at(i));
    if (!lat.pair(f.vertical[i], f.fibre).isZero()) out.push_back("D_i·F = 0 violated at i=" + at(i));
    if (lat.pair(f.vertical[i], f.fibral[i]).sign() >= 0) out.push_back("D_i·F_i < 0 violated at i=" + at(i));
  }

  auto fibral = fibralGenerators(inst, inst.seed.wallFrame);
  for (std::size_t p = 0; p < f.partition.size(); ++p) {
    const auto& member = f.partition[p];
    VectorQ sum = zeros(inst.rank());
    VectorQ pull = zeros(inst.rank());
    bool inRange = true;
    for (std::size_t i : member) {
      if (i >= n) {
        inRange = false;
        continue;
      }
      sum += Rational(f.m[i]) * f.fibral[i];
      pull += f.mu[i] * f.vertical[i];
    }
    if (!inRange) continue;
    if (!sameVector(sum, f.fibre)) out.push_back("Σ m_i F_i ≠ F in partition member " + at(p));
    for (const auto& g : fibral)
      if (!lat.pair(pull, g).isZero()) {
        out.push_back("Σ μ_i D_i ∉ T(X/S) in partition member " + at(p));
        break;
      }
    for (std::size_t i : member)
      for (std::size_t j : member)
        if (i != j && i < n && j < n && lat.pair(f.vertical[i], f.fibral[j]).sign() < 0)
          out.push_back("D_i·F_j ≥ 0 violated at i=" + at(i) + ", j=" + at(j));
  }

  for (std::size_t k = 0; k < f.amplePullbacks.size(); ++k)
    for (const auto& g : fibral)
      if (!lat.pair(f.amplePullbacks[k], g).isZero()) {
        out.push_back("ample pullback " + at(k) + " ∉ T(X/S)");
        break;
      }
  for (const auto& g : fibral)
    if (!lat.pair(inst.canonicalClass, g).isZero()) {
      out.push_back("K·γ = 0 violated on fibral class " + formatVector(g));
      break;
    }
  for (std::size_t k = 0; k < f.kNegativeRays.size(); ++k) {
    const auto& ray = f.kNegativeRays[k];
    if (lat.pair(inst.canonicalClass, ray.curve).sign() >= 0)
      out.push_back("K·c < 0 violated at k-negative ray " + at(k));
    bool divisorial = ray.type != MoriType::Fibre && ray.type != MoriType::Type1;
    if (divisorial && !ray.exceptionalDivisor)
      out.push_back("k-negative ray " + at(k) + " of type " + moriTypeName(ray.type) + " lacks exceptional_divisor");
  }
}

void validateSeed(const VarietyInstance& inst, std::vector<std::string>& out) {
  const auto& frame = inst.seed.wallFrame;
  const auto& fib = inst.fibration;
  for (std::size_t i = 0; i < frame.size(); ++i)
    if (!isIntegral(frame[i]) || !sameVector(primitive(frame[i]), frame[i]))
      out.push_back("seed frame class " + at(i) + " is not integral and primitive");

  std::vector<int> seen(frame.size(), 0);
  for (std::size_t b = 0; b < inst.seed.blocks.size(); ++b) {
    VectorQ sum = zeros(inst.rank());
    for (std::size_t idx : inst.seed.blocks[b]) {
      sum += frame[idx];
      ++seen[idx];
    }
    if (!sameVector(sum, fib.fibre)) out.push_back("seed frame block " + at(b) + " does not sum to F");
  }
  for (std::size_t i = 0; i < frame.size(); ++i)
    if (seen[i] != 1) out.push_back("seed frame class " + at(i) + " must lie in exactly one block");

  std::vector<VectorQ> ineqs;
  for (const auto& c : frame) ineqs.push_back(inst.lattice.functional(c));
  for (const auto& c : fib.fibral) ineqs.push_back(inst.lattice.functional(c));
  PolyCone nef = PolyCone::fromInequalities(ineqs, inst.rank());
  if (!nef.isFullDimensional() || dot(inst.lattice.functional(fib.fibre), nef.relativeInteriorPoint()).sign() <= 0)
    out.push_back("seed chamber nef cone has empty interior within the movable cone");

  for (std::size_t i = 0; i < frame.size(); ++i) {
    bool divisorial = false;
    for (const auto& fi : fib.fibral)
      if (positivelyProportional(fi, frame[i])) divisorial = true;
    if (divisorial) continue;
    MatrixQ t;
    try {
      t = inst.flopRule.mapFor(frame[i]);
    } catch (const InputError& e) {
      out.push_back(std::string("flop rule: ") + e.what());
      continue;
    }
    const std::string where = " at seed wall " + at(i);
    if (!sameVector(VectorQ(t * frame[i]), VectorQ(-frame[i]))) out.push_back("flop rule: t(c) = −c violated" + where);
    if (!sameVector(VectorQ(t * fib.fibre), fib.fibre)) out.push_back("flop rule: t(F) = F violated" + where);
    if (t * t != identity(inst.rank())) out.push_back("flop rule: t² = 1 violated" + where);
    if (inst.flopRule.reflectionForm) {
      const MatrixQ& q = *inst.flopRule.reflectionForm;
      if (MatrixQ(t.transpose() * q * t) != q) out.push_back("flop rule: t preserves the reflection form violated" + where);
    }
    for (const auto& b : inst.seed.blocks) {
      if (std::find(b.begin(), b.end(), i) == b.end()) continue;
      for (std::size_t idx : b)
        if (!isIntegral(VectorQ(t * frame[idx]))) out.push_back("flop rule: integral image violated" + where);
    }
  }
}

}  // namespace

std::vector<std::string> validateInstance(const VarietyInstance& inst) {
  std::vector<std::string> out;
  if (determinant(inst.lattice.pairing).isZero()) {
    out.push_back("pairing is degenerate");
    return out;
  }
  if (inst.iitakaDim < 1 || inst.iitakaDim > 3) out.push_back("iitaka_dim must be 1, 2 or 3");
  if (isZero(inst.fibration.fibre)) out.push_back("fibre class F is zero");
  validateFibration(inst, out);
  validateSeed(inst, out);
  for (std::size_t k = 0; k < inst.groupGenerators.size(); ++k) {
    auto report = validateGroupElement(inst, inst.groupGenerators[k]);
    for (const auto& v : report.violations) out.push_back("group generator " + inst.groupGenerators[k].label + ": " + v);
  }
  return out;
}

VarietyInstance loadAndValidate(const std::string& text, const std::string& label) {
  VarietyInstance inst = parseInstance(text, label);
  auto violations = validateInstance(inst);
  if (!violations.empty()) throw ValidationError(violations);
  return inst;
}

std::vector<std::string> bundledInstanceNames() {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < detail::kBundledInstanceCount; ++i) names.push_back(detail::kBundledInstances[i].name);
  return names;
}

std::optional<std::string> bundledInstanceText(const std::string& name) {
  for (std::size_t i = 0; i < detail::kBundledInstanceCount; ++i)
    if (name == detail::kBundledInstances[i].name) return std::string(detail::kBundledInstances[i].text);
  return std::nullopt;
}

std::string readInstanceText(const std::string& nameOrPath) {
  if (auto text = bundledInstanceText(nameOrPath)) return *text;
  std::ifstream in(nameOrPath);
  if (!in) throw InputError("no bundled instance or readable file named '" + nameOrPath + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

VarietyInstance loadInstance(const std::string& nameOrPath) {
  return loadAndValidate(readInstanceText(nameOrPath), nameOrPath);
}

}  // namespace conelab
