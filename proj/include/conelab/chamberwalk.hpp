#pragma once

#include <optional>
#include <string>
#include <vector>

#include "conelab/polycone.hpp"
#include "conelab/varmodel.hpp"

namespace conelab {

struct Guards {
  long flops = 10000;      // crossings per makeNef
  long chambers = 100000;  // chambers visited per enumeration

  // Defaults, overridden by CONELAB_GUARD_FLOPS / CONELAB_GUARD_CHAMBERS when set.
  static Guards fromEnvironment();
};

// A marked chamber: the fibral curve classes whose nonnegativity cuts out its nef cone.
struct Chamber {
  std::vector<VectorQ> wallFrame;
  std::vector<std::vector<std::size_t>> blocks;
  PolyCone nef;               // {x : x.c >= 0 for c in frame, x.F_i >= 0}
  std::vector<VectorQ> path;  // wall classes crossed from the seed, in order

  // Sorted primitive frame vectors; equal for equal marked chambers.
  std::vector<VectorQ> identity() const;
  std::string key() const;
};

Chamber makeChamber(const VarietyInstance& inst, std::vector<VectorQ> frame,
                    std::vector<std::vector<std::size_t>> blocks, std::vector<VectorQ> path = {});
Chamber seedChamber(const VarietyInstance& inst);
ConeWithOpenFaces nefCone(const VarietyInstance& inst, const Chamber& ch);

struct PrecheckResult {
  bool ok = true;
  std::optional<VectorQ> witness;  // first listed K-negative class with D.c < 0
};

PrecheckResult movablePrecheck(const VarietyInstance& inst, const VectorQ& divisor);

// Frame classes whose wall is a facet of the nef cone inside the movable interior,
// sorted by primitive vector.
std::vector<VectorQ> crossableWalls(const VarietyInstance& inst, const Chamber& ch);

// Throws InputError "boundary wall" for divisorial walls and "not a wall of the chamber"
// when c is not a facet-defining frame class.
Chamber crossWall(const VarietyInstance& inst, const Chamber& ch, const VectorQ& wall);

struct MakeNefResult {
  Chamber chamber;
  std::vector<VectorQ> path;
};

// Walks from `start` (default: seed) crossing the lexicographically smallest wall with D.c < 0.
// No precheck; used internally and by makeNef.
MakeNefResult locateChamber(const VarietyInstance& inst, const VectorQ& divisor, const Guards& guards,
                            const std::optional<Chamber>& start = std::nullopt);
// Throws PreconditionError if the precheck fails or D is outside the relative movable cone,
// GuardTripped("termination", ...) if the crossing guard is exceeded.
MakeNefResult makeNef(const VarietyInstance& inst, const VectorQ& divisor, const Guards& guards = Guards{});

struct ChamberEnumeration {
  std::vector<Chamber> chambers;  // chambers whose intersection with Sigma has dimension dim(Sigma)
  std::size_t visited = 0;        // chambers meeting Sigma nontrivially, including lower-dimensional contact
};

ChamberEnumeration enumerateChambers(const VarietyInstance& inst, const PolyCone& sigma,
                                     const Guards& guards = Guards{});

struct OrbitVisit {
  std::string chamberKey;
  std::size_t representative = 0;
  std::vector<int> word;  // reducing element, letters +-(k+1) for generator k
};

struct OrbitEnumeration {
  std::vector<Chamber> representatives;
  std::vector<OrbitVisit> visits;
  bool complete = false;          // frontier exhausted within budget
  bool reductionExact = true;     // false when word-budget reduction was used
};

// Breadth-first over crossings, canonicalising each chamber up to the group. `budget`
// bounds the number of chambers expanded.
OrbitEnumeration enumerateUpToGroup(const VarietyInstance& inst, std::size_t budget, int wordBudget = 3);

}  // namespace conelab
