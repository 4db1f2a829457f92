#include "conelab/rayclass.hpp"

#include "conelab/errors.hpp"

namespace conelab {

std::string declaredTypeName(DeclaredType t) {
  switch (t) {
    case DeclaredType::MoriFibre: return "fibre";
    case DeclaredType::Type1: return "1";
    case DeclaredType::Type2: return "2";
    case DeclaredType::Type3: return "3";
    case DeclaredType::Type4: return "4";
    case DeclaredType::Type5: return "5";
    case DeclaredType::KTrivial: return "k-trivial";
  }
  return "fibre";
}

std::string coarseClassName(CoarseClass c) {
  switch (c) {
    case CoarseClass::KTrivial: return "k-trivial";
    case CoarseClass::Divisorial: return "divisorial";
    case CoarseClass::FibreType: return "fibre-type";
  }
  return "fibre-type";
}

RayRecord recordFor(const KNegativeRay& ray) {
  RayRecord r;
  r.curve = ray.curve;
  r.exceptionalDivisor = ray.exceptionalDivisor;
  switch (ray.type) {
    case MoriType::Fibre: r.declared = DeclaredType::MoriFibre; break;
    case MoriType::Type1: r.declared = DeclaredType::Type1; break;
    case MoriType::Type2: r.declared = DeclaredType::Type2; break;
    case MoriType::Type3: r.declared = DeclaredType::Type3; break;
    case MoriType::Type4: r.declared = DeclaredType::Type4; break;
    case MoriType::Type5: r.declared = DeclaredType::Type5; break;
  }
  return r;
}

namespace {

bool contractsPoint(DeclaredType t) {
  return t == DeclaredType::Type2 || t == DeclaredType::Type3 || t == DeclaredType::Type4 || t == DeclaredType::Type5;
}

}  // namespace

RayClassification classifyRay(const VarietyInstance& inst, const RayRecord& ray) {
  if (ray.curve.size() != inst.rank()) throw InputError("curve class has the wrong dimension");
  if (isZero(ray.curve)) throw InputError("curve class is zero");
  RayClassification out;
  out.kPairing = inst.lattice.pair(inst.canonicalClass, ray.curve);
  if (out.kPairing.sign() > 0) throw InputError("not a K-negative or K-trivial ray");

  std::optional<Rational> dc;
  if (ray.exceptionalDivisor) dc = inst.lattice.pair(*ray.exceptionalDivisor, ray.curve);
  if (out.kPairing.isZero())
    out.coarse = CoarseClass::KTrivial;
  else if (dc && dc->sign() < 0)
    out.coarse = CoarseClass::Divisorial;
  else
    out.coarse = CoarseClass::FibreType;

  auto issue = [&](const std::string& s) {
    out.consistent = false;
    out.issues.push_back(s);
  };
  const bool ktrivial = ray.declared == DeclaredType::KTrivial;
  if (ktrivial && !out.kPairing.isZero()) issue("declared K-trivial but K·c ≠ 0");
  if (!ktrivial && out.kPairing.isZero()) issue("declared type " + declaredTypeName(ray.declared) + " but K·c = 0");
  if (contractsPoint(ray.declared) || ray.declared == DeclaredType::Type1) {
    if (!ray.exceptionalDivisor) {
      if (ray.declared != DeclaredType::Type1) issue("type " + declaredTypeName(ray.declared) + " requires an exceptional divisor");
    } else if (dc->sign() >= 0) {
      issue("exceptional divisor is not negative on the curve");
    }
  }
  if (ray.declared == DeclaredType::MoriFibre && dc && dc->sign() < 0)
    issue("declared fibre type but the given divisor is negative on the curve");
  return out;
}

KTrivialFaceReport kTrivialFace(const VarietyInstance& inst) {
  const Index r = inst.rank();
  std::vector<VectorQ> relative = inst.seed.wallFrame;
  relative.insert(relative.end(), inst.fibration.fibral.begin(), inst.fibration.fibral.end());
  std::vector<VectorQ> all = relative;
  for (const auto& ray : inst.fibration.kNegativeRays) all.push_back(ray.curve);

  KTrivialFaceReport rep;
  rep.curveCone = PolyCone::fromGenerators(all, r);
  rep.relativeCone = PolyCone::fromGenerators(relative, r);
  // K.gamma as a functional on N_1.
  const VectorQ k = inst.lattice.pairing.transpose() * inst.canonicalClass;
  rep.face = intersect(rep.curveCone, PolyCone::fromInequalities({}, r, {k}));

  bool nonpos = true, nonneg = true;
  for (const auto& g : rep.curveCone.allGenerators()) {
    int s = dot(k, g).sign();
    if (s > 0) nonpos = false;
    if (s < 0) nonneg = false;
  }
  rep.isFace = nonpos || nonneg;
  rep.equal = rep.face == rep.relativeCone;
  if (!rep.equal) {
    for (const auto& g : rep.face.allGenerators())
      if (!rep.relativeCone.contains(g)) {
        rep.witness = g;
        break;
      }
    if (!rep.witness)
      for (const auto& g : rep.relativeCone.allGenerators())
        if (!rep.face.contains(g)) {
          rep.witness = g;
          break;
        }
  }
  return rep;
}

TypeFinitenessReport typeFinitenessCheck(const VarietyInstance& inst, const std::vector<RayRecord>& records) {
  TypeFinitenessReport rep;
  rep.bound = inst.rank() - 1;
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!contractsPoint(records[i].declared)) continue;
    if (!records[i].exceptionalDivisor) {
      rep.missingDivisor.push_back(i);
      continue;
    }
    idx.push_back(i);
  }
  const auto& lat = inst.lattice;
  std::vector<VectorQ> divisors;
  for (std::size_t a = 0; a < idx.size(); ++a) {
    const RayRecord& ra = records[idx[a]];
    divisors.push_back(*ra.exceptionalDivisor);
    for (std::size_t b = a + 1; b < idx.size(); ++b) {
      const RayRecord& rb = records[idx[b]];
      if (!lat.pair(*ra.exceptionalDivisor, rb.curve).isZero() || !lat.pair(*rb.exceptionalDivisor, ra.curve).isZero())
        rep.flaggedPairs.emplace_back(idx[a], idx[b]);
    }
  }
  rep.independentDivisors = rankOf(divisors, inst.rank());
  return rep;
}

}  // namespace conelab
