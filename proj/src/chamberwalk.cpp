#include "conelab/chamberwalk.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <map>
#include <set>

#include "conelab/errors.hpp"
#include "conelab/groupact.hpp"

namespace conelab {

namespace {

long envLong(const char* name, long fallback) {
  const char* v = std::getenv(name);
  if (!v || !*v) return fallback;
  char* end = nullptr;
  long parsed = std::strtol(v, &end, 10);
  if (*end != '\0' || parsed <= 0) throw InputError(std::string(name) + " must be a positive integer");
  return parsed;
}

bool isDivisorialClass(const VarietyInstance& inst, const VectorQ& c) {
  for (const auto& f : inst.fibration.fibral)
    if (positivelyProportional(f, c)) return true;
  return false;
}

// Strictly inside the relative movable cone: x.F > 0 and x.F_i > 0.
bool inMovableInterior(const VarietyInstance& inst, const VectorQ& x) {
  const auto& lat = inst.lattice;
  if (lat.pair(x, inst.fibration.fibre).sign() <= 0) return false;
  for (const auto& f : inst.fibration.fibral)
    if (lat.pair(x, f).sign() <= 0) return false;
  return true;
}

bool isFacet(const Chamber& ch, const VectorQ& functional) {
  const VectorQ p = primitive(functional);
  for (const auto& f : ch.nef.inequalities())
    if (sameVector(f, p)) return true;
  return false;
}

enum class WallKind { Crossable, Boundary, NotFacet };

WallKind classifyWall(const VarietyInstance& inst, const Chamber& ch, const VectorQ& c) {
  if (isDivisorialClass(inst, c)) return WallKind::Boundary;
  const VectorQ fn = inst.lattice.functional(c);
  if (!isFacet(ch, fn)) return WallKind::NotFacet;
  const VectorQ p = ch.nef.face(fn).relativeInteriorPoint();
  return inMovableInterior(inst, p) ? WallKind::Crossable : WallKind::Boundary;
}

bool fibralTrivial(const VarietyInstance& inst, const VectorQ& x, const std::vector<VectorQ>& fibralGens) {
  for (const auto& g : fibralGens)
    if (!inst.lattice.pair(x, g).isZero()) return false;
  return true;
}

}  // namespace

Guards Guards::fromEnvironment() {
  Guards g;
  g.flops = envLong("CONELAB_GUARD_FLOPS", g.flops);
  g.chambers = envLong("CONELAB_GUARD_CHAMBERS", g.chambers);
  return g;
}

std::vector<VectorQ> Chamber::identity() const {
  std::vector<VectorQ> out;
  for (const auto& c : wallFrame) out.push_back(primitive(c));
  std::sort(out.begin(), out.end(), lexLess);
  return out;
}

std::string Chamber::key() const {
  std::string s;
  for (const auto& v : identity()) {
    if (!s.empty()) s += ";";
    s += formatVector(v);
  }
  return s;
}

Chamber makeChamber(const VarietyInstance& inst, std::vector<VectorQ> frame,
                    std::vector<std::vector<std::size_t>> blocks, std::vector<VectorQ> path) {
  std::vector<VectorQ> ineqs;
  for (const auto& c : frame) ineqs.push_back(inst.lattice.functional(c));
  for (const auto& f : inst.fibration.fibral) ineqs.push_back(inst.lattice.functional(f));
  Chamber ch;
  ch.nef = PolyCone::fromInequalities(ineqs, inst.rank());
  ch.wallFrame = std::move(frame);
  ch.blocks = std::move(blocks);
  ch.path = std::move(path);
  return ch;
}

Chamber seedChamber(const VarietyInstance& inst) { return makeChamber(inst, inst.seed.wallFrame, inst.seed.blocks); }

ConeWithOpenFaces nefCone(const VarietyInstance& inst, const Chamber& ch) {
  return {ch.nef, {inst.lattice.functional(inst.fibration.fibre)}};
}

PrecheckResult movablePrecheck(const VarietyInstance& inst, const VectorQ& divisor) {
  if (divisor.size() != inst.rank()) throw InputError("divisor has the wrong dimension");
  for (const auto& ray : inst.fibration.kNegativeRays)
    if (inst.lattice.pair(divisor, ray.curve).sign() < 0) return {false, ray.curve};
  return {};
}

std::vector<VectorQ> crossableWalls(const VarietyInstance& inst, const Chamber& ch) {
  std::vector<VectorQ> out;
  for (const auto& c : ch.wallFrame) {
    if (classifyWall(inst, ch, c) != WallKind::Crossable) continue;
    const VectorQ p = primitive(c);
    if (std::none_of(out.begin(), out.end(), [&](const VectorQ& o) { return sameVector(o, p); })) out.push_back(p);
  }
  std::sort(out.begin(), out.end(), lexLess);
  return out;
}

Chamber crossWall(const VarietyInstance& inst, const Chamber& ch, const VectorQ& wall) {
  if (wall.size() != inst.rank()) throw InputError("wall class has the wrong dimension");
  if (isDivisorialClass(inst, wall)) throw InputError("boundary wall");
  std::size_t idx = ch.wallFrame.size();
  for (std::size_t i = 0; i < ch.wallFrame.size(); ++i)
    if (positivelyProportional(ch.wallFrame[i], wall)) {
      idx = i;
      break;
    }
  if (idx == ch.wallFrame.size()) throw InputError("not a wall of the chamber");
  switch (classifyWall(inst, ch, ch.wallFrame[idx])) {
    case WallKind::Boundary: throw InputError("boundary wall");
    case WallKind::NotFacet: throw InputError("not a wall of the chamber");
    case WallKind::Crossable: break;
  }
  const VectorQ c = ch.wallFrame[idx];
  const MatrixQ t = inst.flopRule.mapFor(c);
  std::vector<VectorQ> frame = ch.wallFrame;
  for (const auto& block : ch.blocks)
    if (std::find(block.begin(), block.end(), idx) != block.end())
      for (std::size_t j : block) frame[j] = t * ch.wallFrame[j];
  std::vector<VectorQ> path = ch.path;
  path.push_back(c);
  return makeChamber(inst, std::move(frame), ch.blocks, std::move(path));
}

MakeNefResult locateChamber(const VarietyInstance& inst, const VectorQ& divisor, const Guards& guards,
                            const std::optional<Chamber>& start) {
  Chamber ch = start ? *start : seedChamber(inst);
  long crossings = 0;
  while (!ch.nef.contains(divisor)) {
    std::vector<VectorQ> candidates;
    for (const auto& c : ch.wallFrame)
      if (inst.lattice.pair(divisor, c).sign() < 0) candidates.push_back(primitive(c));
    std::sort(candidates.begin(), candidates.end(), lexLess);
    const VectorQ* chosen = nullptr;
    for (const auto& c : candidates)
      if (classifyWall(inst, ch, c) == WallKind::Crossable) {
        chosen = &c;
        break;
      }
    if (!chosen) throw InputError("no crossable wall separates the divisor from the current chamber");
    if (++crossings > guards.flops) throw GuardTripped("termination", guards.flops);
    ch = crossWall(inst, ch, *chosen);
  }
  return {ch, ch.path};
}

MakeNefResult makeNef(const VarietyInstance& inst, const VectorQ& divisor, const Guards& guards) {
  auto pre = movablePrecheck(inst, divisor);
  if (!pre.ok) throw PreconditionError("movability precheck failed: D·c < 0 for K-negative ray " + formatVector(*pre.witness));
  const auto& lat = inst.lattice;
  bool movable = lat.pair(divisor, inst.fibration.fibre).sign() > 0;
  for (const auto& f : inst.fibration.fibral)
    if (lat.pair(divisor, f).sign() < 0) movable = false;
  if (!movable) throw PreconditionError("divisor is outside the relative movable cone");
  return locateChamber(inst, divisor, guards);
}

ChamberEnumeration enumerateChambers(const VarietyInstance& inst, const PolyCone& sigma, const Guards& guards) {
  if (sigma.ambientDim() != inst.rank()) throw InputError("Sigma has the wrong ambient dimension");
  const auto& lat = inst.lattice;
  const VectorQ& fibre = inst.fibration.fibre;
  const auto fibralGens = fibralGenerators(inst, inst.seed.wallFrame);
  for (const auto& g : sigma.allGenerators())
    if (lat.pair(g, fibre).sign() <= 0 && !fibralTrivial(inst, g, fibralGens))
      throw PreconditionError("Sigma is not contained in {x : x.F > 0} together with T(X/S)");

  ChamberEnumeration out;
  VectorQ start = sigma.relativeInteriorPoint();
  if (lat.pair(start, fibre).sign() <= 0) return out;  // Sigma lies in T(X/S)

  // Nef cones contain T(X/S) in their lineality, so for full-dimensional Sigma every test
  // below is unchanged by passing to Sigma + T(X/S), which usually has far fewer facets.
  PolyCone region = sigma;
  const auto t = trivialSubspace(inst).basis;
  if (sigma.isFullDimensional() && !t.empty()) {
    std::vector<VectorQ> lin = sigma.lineality();
    lin.insert(lin.end(), t.begin(), t.end());
    region = PolyCone::fromGenerators(sigma.rays(), inst.rank(), lin);
  }

  std::deque<Chamber> queue;
  std::set<std::string> seen;
  Chamber first = locateChamber(inst, start, guards).chamber;
  seen.insert(first.key());
  queue.push_back(std::move(first));
  while (!queue.empty()) {
    Chamber ch = std::move(queue.front());
    queue.pop_front();
    PolyCone meet = intersect(ch.nef, region);
    std::vector<VectorQ> touching;
    for (const auto& r : meet.rays())
      if (lat.pair(r, fibre).sign() > 0) touching.push_back(r);
    if (touching.empty()) continue;
    if (static_cast<long>(++out.visited) > guards.chambers) throw GuardTripped("chamber", guards.chambers);
    for (const auto& c : crossableWalls(inst, ch)) {
      bool onWall = std::any_of(touching.begin(), touching.end(),
                                [&](const VectorQ& r) { return lat.pair(r, c).isZero(); });
      if (!onWall) continue;
      Chamber next = crossWall(inst, ch, c);
      if (seen.insert(next.key()).second) queue.push_back(std::move(next));
    }
    if (meet.dimension() == region.dimension()) out.chambers.push_back(std::move(ch));
  }
  return out;
}

OrbitEnumeration enumerateUpToGroup(const VarietyInstance& inst, std::size_t budget, int wordBudget) {
  GroupContext ctx(inst, wordBudget);
  OrbitEnumeration out;
  out.reductionExact = ctx.trivial() || ctx.translationCase();

  std::map<std::string, std::size_t> repIndex;
  std::set<std::string> visited;
  std::deque<std::size_t> queue;
  auto visit = [&](const Chamber& ch) {
    const std::string key = ch.key();
    if (!visited.insert(key).second) return;
    ChamberReduction red = ctx.reduceChamber(ch);
    const std::string repKey = red.chamber.key();
    auto it = repIndex.find(repKey);
    std::size_t idx;
    if (it == repIndex.end()) {
      idx = out.representatives.size();
      repIndex.emplace(repKey, idx);
      out.representatives.push_back(red.chamber);
      queue.push_back(idx);
    } else {
      idx = it->second;
    }
    out.visits.push_back({key, idx, red.word});
  };

  visit(seedChamber(inst));
  std::size_t expanded = 0;
  while (!queue.empty() && expanded < budget) {
    const Chamber rep = out.representatives[queue.front()];
    queue.pop_front();
    ++expanded;
    for (const auto& c : crossableWalls(inst, rep)) visit(crossWall(inst, rep, c));
  }
  out.complete = queue.empty();
  return out;
}

}  // namespace conelab
