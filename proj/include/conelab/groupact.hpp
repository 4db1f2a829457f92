#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "conelab/chamberwalk.hpp"
#include "conelab/lattice.hpp"
#include "conelab/polycone.hpp"
#include "conelab/varmodel.hpp"

namespace conelab {

struct GroupValidation {
  std::vector<std::string> violations;
  Rational determinant;
  bool valid() const { return violations.empty(); }
};

// Checks integrality, det = +-1, and that g fixes F (dually), K and the ample pullbacks,
// preserves N_1(X/S) and maps the relative movable cone onto itself.
// Throws InputError if the matrix has the wrong size.
GroupValidation validateGroupElement(const VarietyInstance& inst, const GroupElement& g);

// g* on N_1, characterised by (M x).gamma = x.(g* gamma).
MatrixQ adjointOnCurves(const VarietyInstance& inst, const MatrixQ& m);
// (g*)^{-1}: the map carrying the frame of a chamber C to the frame of M C.
MatrixQ frameAction(const VarietyInstance& inst, const MatrixQ& m);

// Affine coordinates on the slice {x.F = 1} of N^1(X/S)/V(X/S): w_j = x.eta_j / x.F.
struct SliceCoordinates {
  std::vector<VectorQ> eta;
  VectorQ fibre;
  // x -> x.eta_j and x -> x.F as vectors in divisor coordinates.
  std::vector<VectorQ> etaFunctionals;
  VectorQ fibreFunctional;

  Index dim() const { return static_cast<Index>(eta.size()); }
  // Requires x.F != 0.
  VectorQ coordinates(const VectorQ& x) const;
  Rational fibreValue(const VectorQ& x) const { return dot(x, fibreFunctional); }
};

SliceCoordinates sliceCoordinates(const VarietyInstance& inst);

struct TranslationCertificate {
  GroupElement element;
  VectorQ translation;  // in slice coordinates
};

// Throws InputError "not a translation on W" unless g* fixes F and moves every eta_j by a
// multiple of F.
TranslationCertificate quotientTranslation(const VarietyInstance& inst, const GroupElement& g);

// Words are sequences of nonzero letters; letter +-(k+1) is generator k or its inverse.
using Word = std::vector<int>;
std::string formatWord(const VarietyInstance& inst, const Word& w);

struct PointReduction {
  VectorQ point;
  Word word;
  MatrixQ matrix;
};

struct ChamberReduction {
  Chamber chamber;
  Word word;
  MatrixQ matrix;
  bool exact = true;  // false: minimum over words up to the budget only
};

struct GroupElementEntry {
  Word word;
  MatrixQ matrix;
};

// Precomputed data for orbit reduction. In the translation case every generator has a
// certificate and reduction is exact lattice reduction into the Dirichlet cell about the
// base point; otherwise reduction minimises the chamber key over words up to wordBudget.
class GroupContext {
 public:
  GroupContext(const VarietyInstance& inst, int wordBudget = 3);

  const VarietyInstance& instance() const { return *inst_; }
  bool translationCase() const { return translation_; }
  bool trivial() const { return inst_->groupGenerators.empty(); }
  const SliceCoordinates& slice() const { return slice_; }
  const TranslationLattice& lattice() const { return lattice_; }
  const std::vector<TranslationCertificate>& certificates() const { return certificates_; }
  const VectorQ& basePoint() const { return base_; }
  int wordBudget() const { return wordBudget_; }

  MatrixQ matrixOf(const Word& w) const;
  // Distinct non-identity elements by shortest word, in order of word length then letters.
  std::vector<GroupElementEntry> elementsUpTo(int length) const;

  Chamber apply(const Chamber& ch, const MatrixQ& m) const;
  // An equivariant interior point of the chamber's slice (centroid of its vertices).
  VectorQ chamberPoint(const Chamber& ch) const;

  // Translation case: the element moving w(x) into the Dirichlet cell; identity otherwise.
  PointReduction reducePoint(const VectorQ& x) const;
  ChamberReduction reduceChamber(const Chamber& ch) const;

  // Dirichlet cell about the base point, as rows (a, b) meaning a.w <= b.
  std::vector<std::pair<VectorQ, Rational>> dirichletCell() const;

 private:
  const VarietyInstance* inst_;
  int wordBudget_;
  bool translation_ = false;
  SliceCoordinates slice_;
  std::vector<TranslationCertificate> certificates_;
  TranslationLattice lattice_;
  VectorQ base_;
  std::vector<MatrixQ> gens_;
  std::vector<MatrixQ> inverses_;

  Word wordForExponents(const IntVec& exponents) const;
};

struct CoverageReport {
  std::size_t samples = 0;
  std::size_t covered = 0;
  std::vector<std::size_t> failures;  // sample indices
};

struct DisjointnessReport {
  int wordBudget = 0;
  std::size_t elementsChecked = 0;
  bool holds = true;
  std::optional<int> firstFailureLength;
  std::optional<std::string> failingWord;
};

struct FundamentalDomainReport {
  CoverageReport coverage;
  DisjointnessReport disjointness;
  // Sample-based coverage and budgeted disjointness: a consistency check, not a proof.
  std::string verdict;
  bool consistent() const { return coverage.covered == coverage.samples && disjointness.holds; }
};

// Random rational point in the interior of the relative movable cone.
VectorQ sampleMovablePoint(const VarietyInstance& inst, std::mt19937_64& rng);

FundamentalDomainReport fundamentalDomainCheck(const VarietyInstance& inst, const PolyCone& pi, std::size_t samples,
                                               int wordBudget, std::uint64_t seed = 1);

}  // namespace conelab
