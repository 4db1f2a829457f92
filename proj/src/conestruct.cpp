#include "conelab/conestruct.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

#include "conelab/errors.hpp"

namespace conelab {

ConeWithOpenFaces relativeMovableCone(const VarietyInstance& inst) {
  std::vector<VectorQ> ineqs;
  for (const auto& f : inst.fibration.fibral) ineqs.push_back(inst.lattice.functional(f));
  return {PolyCone::fromInequalities(ineqs, inst.rank()), {inst.lattice.functional(inst.fibration.fibre)}};
}

RelativeEffectivePredicate relativeEffectivePredicate(const VarietyInstance& inst) {
  const VectorQ f = inst.lattice.functional(inst.fibration.fibre);
  RelativeEffectivePredicate pred;
  pred.strictPiece = {PolyCone::fromInequalities({f}, inst.rank()), {f}};
  pred.rayPiece = PolyCone::fromGenerators(inst.fibration.vertical, inst.rank());
  return pred;
}

std::string effectivePieceName(EffectivePiece p) {
  switch (p) {
    case EffectivePiece::None: return "none";
    case EffectivePiece::Zero: return "zero";
    case EffectivePiece::Strict: return "strict";
    case EffectivePiece::Ray: return "ray";
  }
  return "none";
}

EffectiveMembership effectiveMembership(const RelativeEffectivePredicate& pred, const VectorQ& x) {
  if (pred.includesZero && isZero(x)) return {true, EffectivePiece::Zero};
  if (membership(pred.strictPiece, x, MembershipMode::Closed)) return {true, EffectivePiece::Strict};
  if (pred.rayPiece.contains(x)) return {true, EffectivePiece::Ray};
  return {};
}

PullbackResult pullbackWitness(const VarietyInstance& inst, const std::vector<Rational>& r) {
  const auto& fib = inst.fibration;
  if (r.size() != fib.vertical.size())
    throw InputError("expected " + std::to_string(fib.vertical.size()) + " coefficients, got " + std::to_string(r.size()));
  PullbackResult out;
  out.divisor = zeros(inst.rank());
  for (std::size_t i = 0; i < r.size(); ++i) out.divisor += r[i] * fib.vertical[i];
  for (std::size_t j = 0; j < fib.fibral.size(); ++j)
    if (inst.lattice.pair(out.divisor, fib.fibral[j]).sign() < 0) {
      out.violatingIndex = j;
      return out;
    }
  std::vector<Rational> lambda;
  for (const auto& member : fib.partition) {
    if (member.empty()) {
      lambda.push_back(Rational(0));
      continue;
    }
    const Rational l = r[member.front()] / fib.mu[member.front()];
    for (std::size_t i : member)
      if (r[i] != l * fib.mu[i])
        throw std::logic_error("x.F_j >= 0 for all j but r is not proportional to mu on a partition member");
    lambda.push_back(l);
  }
  out.lambda = lambda;
  return out;
}

LiftReport liftToAbsolute(const VarietyInstance& inst, const VectorQ& relClass, const LiftBounds& bounds) {
  if (relClass.size() != inst.rank()) throw InputError("class has the wrong dimension");
  auto mov = relativeMovableCone(inst);
  if (!membership(mov, relClass, MembershipMode::Closed))
    throw PreconditionError("class is outside the relative movable cone");
  LiftReport rep;
  rep.inputClass = relClass;
  const auto& amples = inst.fibration.amplePullbacks;
  if (inst.isRelative) {
    rep.liftedClass = relClass;
    return rep;
  }
  const std::size_t k = amples.size();
  std::vector<Integer> nu(k, 0);
  for (long m = 1; m <= bounds.maxM; ++m) {
    const VectorQ base = Rational(m) * relClass;
    const long maxTotal = bounds.maxNu * static_cast<long>(k);
    for (long total = 0; total <= maxTotal; ++total) {
      // Compositions of `total` into k parts, each at most maxNu, in lexicographic order.
      std::optional<VectorQ> found;
      std::function<void(std::size_t, long, VectorQ)> rec = [&](std::size_t i, long left, VectorQ acc) {
        if (found) return;
        if (i + 1 >= k) {
          if (k > 0) {
            if (left > bounds.maxNu) return;
            nu[k - 1] = left;
            acc += Rational(left) * amples[k - 1];
          } else if (left != 0) {
            return;
          }
          if (movablePrecheck(inst, acc).ok) found = acc;
          return;
        }
        for (long v = 0; v <= std::min(left, bounds.maxNu) && !found; ++v) {
          nu[i] = v;
          rec(i + 1, left - v, VectorQ(acc + Rational(v) * amples[i]));
        }
      };
      rec(0, total, base);
      if (found) {
        rep.liftedClass = *found;
        rep.m = m;
        rep.nu = nu;
        return rep;
      }
      if (k == 0) break;
    }
  }
  throw SearchExhausted("lift not found within bounds (m <= " + std::to_string(bounds.maxM) +
                        ", nu_k <= " + std::to_string(bounds.maxNu) + ")");
}

KReport buildK(const VarietyInstance& inst, const std::optional<SlicePolytope>& pi) {
  const auto& lat = inst.lattice;
  const SliceCoordinates sc = sliceCoordinates(inst);
  KReport rep;
  if (pi) {
    rep.pi = *pi;
  } else if (sc.dim() > 0) {
    GroupContext ctx(inst);
    if (!ctx.translationCase())
      throw PreconditionError("default Pi needs every group generator to be a translation on W");
    if (ctx.lattice().rank() < sc.dim())
      throw InputError("boundedness certificate failed (translation lattice has rank " +
                       std::to_string(ctx.lattice().rank()) + " < dim W = " + std::to_string(sc.dim()) + ")");
    rep.pi = ctx.dirichletCell();
  }
  const VectorQ f = lat.functional(inst.fibration.fibre);
  std::vector<VectorQ> ineqs = {f};
  for (const auto& c : inst.fibration.fibral) ineqs.push_back(lat.functional(c));
  for (const auto& [a, b] : rep.pi) {
    if (a.size() != sc.dim()) throw InputError("Pi row has dimension " + std::to_string(a.size()) + ", W has " + std::to_string(sc.dim()));
    // a.w <= b  <=>  b (x.F) - sum a_j (x.eta_j) >= 0 on x.F > 0.
    VectorQ row = b * f;
    for (Index j = 0; j < sc.dim(); ++j) row -= a(j) * lat.functional(sc.eta[static_cast<std::size_t>(j)]);
    ineqs.push_back(row);
  }
  rep.cone = PolyCone::fromInequalities(ineqs, inst.rank());

  const auto t = canonicalSpanBasis(trivialSubspace(inst).basis, inst.rank());
  bool bounded = rep.cone.lineality().size() == t.size() &&
                 std::equal(t.begin(), t.end(), rep.cone.lineality().begin(), sameVector);
  for (const auto& r : rep.cone.rays())
    if (lat.pair(r, inst.fibration.fibre).sign() <= 0) bounded = false;
  if (!bounded) throw InputError("boundedness certificate failed");

  for (const auto& fi : inst.fibration.fibral) {
    std::optional<Rational> lo, hi;
    for (const auto& r : rep.cone.rays()) {
      Rational v = lat.pair(r, fi) / lat.pair(r, inst.fibration.fibre);
      if (!lo || v < *lo) lo = v;
      if (!hi || v > *hi) hi = v;
    }
    rep.fibralRanges.emplace_back(lo.value_or(Rational(0)), hi.value_or(Rational(0)));
  }
  return rep;
}

bool UReport::allVerified() const {
  return std::all_of(witnesses.begin(), witnesses.end(), [](const UWitness& w) { return w.verified; });
}

UReport buildU(const VarietyInstance& inst, const std::optional<std::vector<Chamber>>& targets, const Guards& guards) {
  const auto& lat = inst.lattice;
  const auto& fib = inst.fibration;
  KReport k = buildK(inst);
  GroupContext ctx(inst);

  VectorQ ampleSum = zeros(inst.rank());
  for (const auto& a : fib.amplePullbacks) ampleSum += a;
  auto bigEnough = [&](const VectorQ& x) {
    if (lat.pair(x, fib.fibre).sign() <= 0) return false;
    for (const auto& ray : fib.kNegativeRays)
      if (lat.pair(x, ray.curve).sign() <= 0) return false;
    return true;
  };

  UReport rep;
  for (const auto& r : k.cone.rays()) {
    VectorQ x = liftToAbsolute(inst, r).liftedClass;
    for (int step = 0; step < 4096 && !bigEnough(x) && !fib.amplePullbacks.empty(); ++step) x += ampleSum;
    rep.k0.push_back(x);
  }
  std::vector<VectorQ> gens = rep.k0;
  gens.insert(gens.end(), fib.amplePullbacks.begin(), fib.amplePullbacks.end());
  rep.cone = PolyCone::fromGenerators(gens, inst.rank());
  rep.covering = enumerateChambers(inst, rep.cone, guards).chambers;

  const std::vector<Chamber>& goal = targets ? *targets : rep.covering;
  for (const auto& ch : goal) {
    UWitness w;
    w.chamberKey = ch.key();
    const VectorQ x = ch.nef.relativeInteriorPoint();
    PointReduction red = ctx.reducePoint(x);
    VectorQ u = red.point;
    if (!fib.amplePullbacks.empty())
      for (Rational s = 1; !rep.cone.contains(u) && s <= Rational(1L << 30); s *= Rational(2))
        if (rep.cone.contains(VectorQ(red.point + s * ampleSum))) u = red.point + s * ampleSum;
    for (auto it = red.word.rbegin(); it != red.word.rend(); ++it) w.word.push_back(-*it);
    const MatrixQ g = *inverse(red.matrix);
    w.u = u;
    w.image = g * u;
    w.verified = rep.cone.contains(u) && ch.nef.containsInInterior(w.image);
    rep.witnesses.push_back(std::move(w));
  }
  return rep;
}

}  // namespace conelab
