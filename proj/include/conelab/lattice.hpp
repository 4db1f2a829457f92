#pragma once

#include <vector>

#include "conelab/exactq.hpp"

namespace conelab {

// A lattice in Q^d spanned by (possibly dependent) rational generators, with the
// standard Euclidean metric. All computations are exact.
class TranslationLattice {
 public:
  TranslationLattice() = default;
  TranslationLattice(const std::vector<VectorQ>& generators, Index dim);

  Index ambientDim() const { return dim_; }
  Index rank() const { return static_cast<Index>(basis_.size()); }
  const std::vector<VectorQ>& basis() const { return basis_; }
  // Row k: integer coefficients of basis()[k] in terms of the generators.
  const std::vector<IntVec>& basisInGenerators() const { return toGenerators_; }

  // Every lattice vector at minimal distance from y (after projecting y onto the span).
  std::vector<VectorQ> closestVectors(const VectorQ& y) const;
  // The closest vector v minimising y - v lexicographically; `coefficients` gets v in the basis.
  VectorQ reduce(const VectorQ& y, IntVec* coefficients = nullptr) const;
  // Exponents on the generators producing the lattice vector with these basis coefficients.
  IntVec generatorExponents(const IntVec& basisCoefficients) const;

  // Voronoi-relevant vectors: the unique shortest +-pairs in the nonzero cosets of L/2L.
  std::vector<VectorQ> voronoiRelevantVectors() const;
  // {y : 2 y.v <= v.v for all relevant v}, as rows (a, b) meaning a.y <= b.
  std::vector<std::pair<VectorQ, Rational>> dirichletCellInequalities() const;

 private:
  Index dim_ = 0;
  std::vector<VectorQ> basis_;
  std::vector<IntVec> toGenerators_;
};

// Integer coefficient vectors z minimising |y - sum z_i b_i| over the lattice with basis b.
std::vector<IntVec> closestPointsInBasis(const std::vector<VectorQ>& basis, const VectorQ& y);

// LLL reduction (delta = 3/4); `transform` (if given) is updated alongside as row operations.
void lllReduce(std::vector<VectorQ>& basis, std::vector<IntVec>* transform = nullptr);

}  // namespace conelab
