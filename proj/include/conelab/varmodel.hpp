#pragma once

#include <optional>
#include <string>
#include <vector>

#include "conelab/exactq.hpp"
#include "conelab/json_io.hpp"

namespace conelab {

// Divisor space N^1 and curve space N_1 in fixed bases; D.C = d^T P c.
struct LatticePair {
  Index rank = 0;
  std::vector<std::string> divisorBasisLabels;
  std::vector<std::string> curveBasisLabels;
  MatrixQ pairing;

  Rational pair(const VectorQ& divisor, const VectorQ& curve) const { return dot(divisor, pairing * curve); }
  // The linear functional x -> x.curve as a vector in divisor coordinates.
  VectorQ functional(const VectorQ& curve) const { return pairing * curve; }
};

enum class MoriType { Fibre, Type1, Type2, Type3, Type4, Type5 };

std::string moriTypeName(MoriType t);

struct KNegativeRay {
  VectorQ curve;
  MoriType type = MoriType::Fibre;
  std::optional<VectorQ> exceptionalDivisor;
};

struct FibrationData {
  VectorQ fibre;
  std::vector<VectorQ> fibral;    // F_1..F_n in N_1
  std::vector<VectorQ> vertical;  // D_1..D_n in N^1
  std::vector<std::vector<std::size_t>> partition;
  std::vector<Integer> m;
  std::vector<Rational> mu;
  std::vector<VectorQ> amplePullbacks;
  std::vector<KNegativeRay> kNegativeRays;
};

// Action on curve classes when a wall c is flopped.
struct FlopRule {
  std::optional<MatrixQ> reflectionForm;
  std::vector<std::pair<VectorQ, MatrixQ>> explicitMaps;

  // Matrix on N_1 for the wall c. Throws InputError when the rule has no map for c.
  MatrixQ mapFor(const VectorQ& wall) const;
};

struct GroupElement {
  MatrixQ matrix;  // acts on N^1, x -> M x
  std::string label;
  std::string provenance;
};

struct SeedChamber {
  std::vector<VectorQ> wallFrame;
  // Frame indices grouped by reducible fibre; a flop acts only on the block of its wall.
  std::vector<std::vector<std::size_t>> blocks;
};

struct VarietyInstance {
  std::string label;
  LatticePair lattice;
  VectorQ canonicalClass;
  int iitakaDim = 2;
  FibrationData fibration;
  FlopRule flopRule;
  SeedChamber seed;
  std::vector<GroupElement> groupGenerators;
  Json metadata = Json::object();
  bool isRelative = true;

  Index rank() const { return lattice.rank; }
  std::size_t verticalCount() const { return fibration.vertical.size(); }
};

// Schema-level parse; ParseError names the offending JSON path.
VarietyInstance parseInstance(const std::string& text, const std::string& label = "");
// Every violated identity, in a fixed order; empty when the instance is valid.
std::vector<std::string> validateInstance(const VarietyInstance& inst);
// Parse and validate; ValidationError carries the full list of violations.
VarietyInstance loadAndValidate(const std::string& text, const std::string& label = "");

std::vector<std::string> bundledInstanceNames();
std::optional<std::string> bundledInstanceText(const std::string& name);
// A bundled name or a path to a JSON file.
std::string readInstanceText(const std::string& nameOrPath);
VarietyInstance loadInstance(const std::string& nameOrPath);

struct TrivialSubspace {
  std::vector<VectorQ> basis;        // T(X/S) inside N^1
  std::vector<VectorQ> fibralBasis;  // basis of N_1(X/S) chosen from F, F_i, frame classes
  MatrixQ quotient;                  // N^1 -> N^1(X/S), x -> (x.beta_j)_j
};

TrivialSubspace trivialSubspace(const VarietyInstance& inst);
TrivialSubspace trivialSubspace(const VarietyInstance& inst, const std::vector<VectorQ>& frame);

// F together with the F_i and frame classes: the generators of N_1(X/S).
std::vector<VectorQ> fibralGenerators(const VarietyInstance& inst, const std::vector<VectorQ>& frame);

// Unordered pairs of distinct fibral classes (frame and F_i) summing to F.
std::vector<std::pair<VectorQ, VectorQ>> fibralDecompositionPairs(const VarietyInstance& inst);

}  // namespace conelab
