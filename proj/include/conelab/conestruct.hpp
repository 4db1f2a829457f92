#pragma once

#include <optional>
#include <string>
#include <vector>

#include "conelab/chamberwalk.hpp"
#include "conelab/groupact.hpp"
#include "conelab/polycone.hpp"
#include "conelab/varmodel.hpp"

namespace conelab {

// All cones live in N^1 coordinates; classes differing by T(X/S) are not identified, so
// relative cones of absolute instances carry T(X/S) inside their lineality.

// {x.F_i >= 0} with x.F strict.
ConeWithOpenFaces relativeMovableCone(const VarietyInstance& inst);

struct RelativeEffectivePredicate {
  ConeWithOpenFaces strictPiece;  // {x : x.F > 0}
  PolyCone rayPiece;              // cone over the vertical divisors
  bool includesZero = true;
};

RelativeEffectivePredicate relativeEffectivePredicate(const VarietyInstance& inst);

enum class EffectivePiece { None, Zero, Strict, Ray };
std::string effectivePieceName(EffectivePiece p);

struct EffectiveMembership {
  bool member = false;
  EffectivePiece piece = EffectivePiece::None;
};

// A union of pieces, not their convex hull. Strict is reported before Ray.
EffectiveMembership effectiveMembership(const RelativeEffectivePredicate& pred, const VectorQ& x);

struct PullbackResult {
  VectorQ divisor;                              // sum r_i D_i
  std::optional<std::vector<Rational>> lambda;  // per partition member: r_i = lambda_p mu_i
  std::optional<std::size_t> violatingIndex;    // 0-based j with x.F_j < 0
  bool isPullback() const { return lambda.has_value(); }
};

// Throws std::logic_error if every x.F_j >= 0 but r is not proportional to mu on some member:
// the instance then contradicts the negativity lemma.
PullbackResult pullbackWitness(const VarietyInstance& inst, const std::vector<Rational>& r);

struct LiftBounds {
  long maxM = 32;
  long maxNu = 64;
};

struct LiftReport {
  VectorQ inputClass;
  VectorQ liftedClass;
  Integer m = 1;
  std::vector<Integer> nu;
};

// Smallest m, then smallest nu (by total, then lexicographically), such that
// m x + sum nu_k A_k passes the movability precheck. Relative instances return m = 1, nu = [].
LiftReport liftToAbsolute(const VarietyInstance& inst, const VectorQ& relClass, const LiftBounds& bounds = {});

using SlicePolytope = std::vector<std::pair<VectorQ, Rational>>;  // rows a.w <= b

struct KReport {
  PolyCone cone;
  SlicePolytope pi;
  std::vector<std::pair<Rational, Rational>> fibralRanges;  // min/max of x.F_i on the slice
};

// Cone over q^{-1}(Pi) in the relative movable cone. The default Pi is the Dirichlet cell
// about the seed base point. Throws InputError "boundedness certificate failed" when the
// slice is unbounded.
KReport buildK(const VarietyInstance& inst, const std::optional<SlicePolytope>& pi = std::nullopt);

struct UWitness {
  std::string chamberKey;
  Word word;           // g with g.u in the chamber's interior
  VectorQ u;
  VectorQ image;
  bool verified = false;
};

struct UReport {
  PolyCone cone;
  std::vector<VectorQ> k0;
  std::vector<Chamber> covering;  // chambers meeting U in a full-dimensional set
  std::vector<UWitness> witnesses;
  bool allVerified() const;
};

// Targets default to the covering chambers.
UReport buildU(const VarietyInstance& inst, const std::optional<std::vector<Chamber>>& targets = std::nullopt,
               const Guards& guards = Guards{});

}  // namespace conelab
