#pragma once

#include <vector>

#include "conelab/exactq.hpp"

namespace conelab {

// Closed polyhedral cone in Q^d, kept simultaneously as
//   V: rays (extreme, modulo lineality) + lineality basis
//   H: facet inequalities (v.x >= 0) + implicit equality basis (e.x = 0).
// Both sides are canonical: lineality/equality bases are in reduced echelon form,
// rays are primitive and orthogonal to the lineality space, facet normals are
// primitive and orthogonal to the equality space, and lists are sorted. Two cones
// are equal as sets iff their canonical data coincide.
class PolyCone {
 public:
  PolyCone() = default;

  static PolyCone fromGenerators(const std::vector<VectorQ>& generators, Index dim,
                                 const std::vector<VectorQ>& lineality = {});
  static PolyCone fromInequalities(const std::vector<VectorQ>& inequalities, Index dim,
                                   const std::vector<VectorQ>& equalities = {});
  static PolyCone wholeSpace(Index dim) { return fromInequalities({}, dim); }
  static PolyCone origin(Index dim) { return fromGenerators({}, dim); }

  Index ambientDim() const { return dim_; }
  Index dimension() const { return dim_ - static_cast<Index>(equalities_.size()); }
  Index linealityDim() const { return static_cast<Index>(lineality_.size()); }

  const std::vector<VectorQ>& rays() const { return rays_; }
  const std::vector<VectorQ>& lineality() const { return lineality_; }
  const std::vector<VectorQ>& inequalities() const { return facets_; }
  const std::vector<VectorQ>& equalities() const { return equalities_; }

  // Facets plus both signs of every equality; each row v means v.x >= 0.
  std::vector<VectorQ> allInequalities() const;
  // Rays plus both signs of every lineality vector.
  std::vector<VectorQ> allGenerators() const;

  bool isFullDimensional() const { return equalities_.empty(); }
  bool isPointed() const { return lineality_.empty(); }
  bool isOrigin() const { return rays_.empty() && lineality_.empty(); }

  bool contains(const VectorQ& x) const;
  // Interior relative to the ambient space; false for lower-dimensional cones.
  bool containsInInterior(const VectorQ& x) const;
  bool containsInRelativeInterior(const VectorQ& x) const;

  // Sum of rays; lies in the relative interior.
  VectorQ relativeInteriorPoint() const;

  // {y : y.x >= 0 for all x in C}. Swaps the two canonical descriptions.
  PolyCone dual() const;

  // Face cut out by a supporting inequality v (v >= 0 on C assumed).
  PolyCone face(const VectorQ& v) const;

  friend bool operator==(const PolyCone& a, const PolyCone& b);
  friend bool operator!=(const PolyCone& a, const PolyCone& b) { return !(a == b); }

 private:
  Index dim_ = 0;
  std::vector<VectorQ> rays_;
  std::vector<VectorQ> lineality_;
  std::vector<VectorQ> facets_;
  std::vector<VectorQ> equalities_;

  friend PolyCone buildFromH(const std::vector<VectorQ>&, Index);
  friend PolyCone buildFromV(const std::vector<VectorQ>&, const std::vector<VectorQ>&, Index);
  friend PolyCone mapCone(const PolyCone&, const MatrixQ&);
};

// A closed cone with some facet-defining functionals made strict: the set
// base \ {x : s.x = 0 for some strict functional s} (with s >= 0 on base), plus {0}.
struct ConeWithOpenFaces {
  PolyCone base;
  std::vector<VectorQ> strict;
};

enum class MembershipMode { Closed, Interior };

enum class ConeInput { Generators, Inequalities };

// Double-description conversion: populates both canonical representations.
PolyCone buildDualPair(const std::vector<VectorQ>& input, ConeInput kind, Index dim);

// Closed: every inequality holds and every strict functional is positive. The origin
// therefore fails whenever a strict functional is present; callers add it back.
// Interior: x in the topological interior of c.base, strict functionals positive.
bool membership(const ConeWithOpenFaces& c, const VectorQ& x, MembershipMode mode);
bool membership(const PolyCone& c, const VectorQ& x, MembershipMode mode);

PolyCone intersect(const PolyCone& a, const PolyCone& b);
// Image under an invertible linear map M (column convention x -> M x).
PolyCone mapCone(const PolyCone& c, const MatrixQ& m);

}  // namespace conelab
