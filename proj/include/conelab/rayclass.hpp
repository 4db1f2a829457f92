#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "conelab/polycone.hpp"
#include "conelab/varmodel.hpp"

namespace conelab {

enum class DeclaredType { MoriFibre, Type1, Type2, Type3, Type4, Type5, KTrivial };
std::string declaredTypeName(DeclaredType t);

struct RayRecord {
  VectorQ curve;
  DeclaredType declared = DeclaredType::MoriFibre;
  std::optional<VectorQ> exceptionalDivisor;
};

RayRecord recordFor(const KNegativeRay& ray);

enum class CoarseClass { KTrivial, Divisorial, FibreType };
std::string coarseClassName(CoarseClass c);

struct RayClassification {
  CoarseClass coarse = CoarseClass::FibreType;
  Rational kPairing;
  bool consistent = true;
  std::vector<std::string> issues;
};

// Throws InputError for a zero class or K.c > 0.
RayClassification classifyRay(const VarietyInstance& inst, const RayRecord& ray);

struct KTrivialFaceReport {
  PolyCone curveCone;     // cone over the K-negative rays, frame classes and F_i
  PolyCone face;          // curveCone cut by K.gamma = 0
  PolyCone relativeCone;  // cone over the frame classes and F_i
  bool isFace = false;    // K has constant sign on the curve cone
  bool equal = false;
  std::optional<VectorQ> witness;  // a ray of one cone missing from the other
};

KTrivialFaceReport kTrivialFace(const VarietyInstance& inst);

struct TypeFinitenessReport {
  std::vector<std::pair<std::size_t, std::size_t>> flaggedPairs;  // i < j
  Index independentDivisors = 0;
  Index bound = 0;  // rank - 1
  std::vector<std::size_t> missingDivisor;  // records without exceptionalDivisor
  bool passes() const {
    return flaggedPairs.empty() && independentDivisors <= bound && missingDivisor.empty();
  }
};

// Records of types other than 2..5 are ignored.
TypeFinitenessReport typeFinitenessCheck(const VarietyInstance& inst, const std::vector<RayRecord>& records);

}  // namespace conelab
