#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "conelab/conestruct.hpp"
#include "conelab/errors.hpp"
#include "support.hpp"

using namespace conelab;
using testing_support::i2Chamber;

namespace {

// Smallest (m, nu) with m x + nu A passing every listed K-negative pairing, scanned directly.
std::optional<std::pair<long, long>> scanLift(const VarietyInstance& inst, const VectorQ& x, long maxM, long maxNu) {
  const VectorQ& a = inst.fibration.amplePullbacks[0];
  const MatrixQ& p = inst.lattice.pairing;
  for (long m = 1; m <= maxM; ++m)
    for (long nu = 0; nu <= maxNu; ++nu) {
      VectorQ d = Rational(m) * x + Rational(nu) * a;
      bool ok = true;
      for (const auto& ray : inst.fibration.kNegativeRays)
        if (dot(d, VectorQ(p * ray.curve)).sign() < 0) ok = false;
      if (ok) return std::make_pair(m, nu);
    }
  return std::nullopt;
}

SlicePolytope interval(const Rational& lo, const Rational& hi) {
  return {{VectorQ::Constant(1, Rational(1)), hi}, {VectorQ::Constant(1, Rational(-1)), -lo}};
}

}  // namespace

TEST_CASE("relative movable cones") {
  auto toy = loadInstance("toy-vertical");
  auto mov = relativeMovableCone(toy);
  CHECK(mov.base == PolyCone::fromGenerators({fromInts({1, 0}), fromInts({0, 1})}, 2));
  REQUIRE(mov.strict.size() == 1);
  CHECK(sameVector(mov.strict[0], fromInts({1, 1})));

  auto i2 = loadInstance("i2-chain");
  auto whole = relativeMovableCone(i2);
  CHECK(whole.base == PolyCone::wholeSpace(2));
  CHECK(sameVector(whole.strict[0], fromInts({1, 0})));

  // No vertical divisors: the half-space x.F > 0 with T(X/S) in its boundary.
  auto quadric = loadInstance("quadric-net");
  auto qm = relativeMovableCone(quadric);
  CHECK(qm.base.isFullDimensional());
  CHECK(qm.base.inequalities().empty());
  CHECK(sameVector(qm.strict[0], quadric.lattice.functional(quadric.fibration.fibre)));
}

TEST_CASE("movable cone members are effective via the strict piece") {
  for (const auto& name : bundledInstanceNames()) {
    auto inst = loadInstance(name);
    auto mov = relativeMovableCone(inst);
    auto pred = relativeEffectivePredicate(inst);
    std::mt19937_64 rng(1);
    for (int i = 0; i < 50; ++i) {
      VectorQ x = sampleMovablePoint(inst, rng);
      CHECK(membership(mov, x, MembershipMode::Closed));
      auto e = effectiveMembership(pred, x);
      CHECK(e.member);
      CHECK(e.piece == EffectivePiece::Strict);
    }
  }
}

TEST_CASE("effectiveMembership examples") {
  auto pred = relativeEffectivePredicate(loadInstance("toy-vertical"));
  auto e = effectiveMembership(pred, fromInts({1, 1}));
  CHECK(e.member);
  CHECK(e.piece == EffectivePiece::Strict);
  e = effectiveMembership(pred, fromInts({-1, 1}));
  CHECK(e.member);
  CHECK(e.piece == EffectivePiece::Ray);
  CHECK_FALSE(effectiveMembership(pred, fromInts({-1, 0})).member);
  e = effectiveMembership(pred, fromInts({0, 0}));
  CHECK(e.piece == EffectivePiece::Zero);
  // x.F < 0 and off the line spanned by D_1 = -D_2.
  CHECK_FALSE(effectiveMembership(pred, fromInts({-2, 1})).member);
  CHECK(effectivePieceName(EffectivePiece::Ray) == "ray");
}

TEST_CASE("effectiveMembership matches the three-piece formula on a grid") {
  auto inst = loadInstance("toy-vertical");
  auto pred = relativeEffectivePredicate(inst);
  std::size_t mismatches = 0;
  for (int i = -20; i <= 20; ++i)
    for (int j = -20; j <= 20; ++j) {
      const Rational x1(i, 10), x2(j, 10);
      VectorQ x(2);
      x << x1, x2;
      // x.F = x1 + x2; the ray piece is the line x1 + x2 = 0 (both D_i lie on it, opposite rays).
      const bool expected = (x1 + x2).sign() > 0 || (x1 + x2).isZero();
      if (effectiveMembership(pred, x).member != expected) ++mismatches;
    }
  CHECK(mismatches == 0);
}

TEST_CASE("pullbackWitness examples") {
  auto toy = loadInstance("toy-vertical");
  auto w = pullbackWitness(toy, {Rational(1), Rational(1)});
  REQUIRE(w.isPullback());
  CHECK((*w.lambda)[0] == Rational(1));
  CHECK(isZero(w.divisor));

  auto v = pullbackWitness(toy, {Rational(1), Rational(0)});
  CHECK_FALSE(v.isPullback());
  REQUIRE(v.violatingIndex);
  CHECK(*v.violatingIndex == 0);

  auto quadric = loadInstance("quadric-net");
  auto empty = pullbackWitness(quadric, {});
  CHECK(empty.isPullback());
  CHECK(empty.lambda->empty());

  CHECK_THROWS_AS(pullbackWitness(toy, {Rational(1)}), InputError);
}

TEST_CASE("pullbackWitness dichotomy on random coefficients") {
  auto inst = loadInstance("toy-vertical");
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> num(-6, 6), den(1, 4);
  std::bernoulli_distribution equal(0.3);
  for (int t = 0; t < 300; ++t) {
    Rational a(num(rng), den(rng));
    Rational b = equal(rng) ? a : Rational(num(rng), den(rng));
    auto res = pullbackWitness(inst, {a, b});
    VectorQ x = a * inst.fibration.vertical[0] + b * inst.fibration.vertical[1];
    bool allNonneg = true;
    for (const auto& f : inst.fibration.fibral) allNonneg = allNonneg && inst.lattice.pair(x, f).sign() >= 0;
    CHECK(res.isPullback() == allNonneg);
    CHECK(res.isPullback() != res.violatingIndex.has_value());
    if (res.isPullback()) {
      for (const auto& f : inst.fibration.fibral) CHECK(inst.lattice.pair(x, f).isZero());
    } else {
      CHECK(inst.lattice.pair(x, inst.fibration.fibral[*res.violatingIndex]).sign() < 0);
    }
  }
}

TEST_CASE("liftToAbsolute") {
  auto quadric = loadInstance("quadric-net");
  auto quot = trivialSubspace(quadric).quotient;

  auto h = liftToAbsolute(quadric, unit(9, 0));
  CHECK(h.m == 1);
  REQUIRE(h.nu.size() == 1);
  CHECK(h.nu[0] == 0);

  VectorQ e1 = unit(9, 1);
  auto l = liftToAbsolute(quadric, e1);
  auto oracle = scanLift(quadric, e1, 32, 64);
  REQUIRE(oracle);
  CHECK(l.m == oracle->first);
  CHECK(l.nu[0] == oracle->second);
  CHECK(movablePrecheck(quadric, l.liftedClass).ok);
  CHECK(sameVector(VectorQ(quot * l.liftedClass), VectorQ(Rational(l.m) * (quot * e1))));

  // Random classes with x.F > 0 agree with the direct scan.
  std::mt19937_64 rng(4);
  for (int t = 0; t < 20; ++t) {
    VectorQ x = sampleMovablePoint(quadric, rng);
    auto rep = liftToAbsolute(quadric, x);
    auto o = scanLift(quadric, x, 32, 64);
    REQUIRE(o);
    CHECK(rep.m == o->first);
    CHECK(rep.nu[0] == o->second);
    CHECK(sameVector(VectorQ(quot * rep.liftedClass), VectorQ(Rational(rep.m) * (quot * x))));
  }

  CHECK_THROWS_AS(liftToAbsolute(quadric, VectorQ(-unit(9, 0))), PreconditionError);
  LiftBounds none;
  none.maxM = 1;
  none.maxNu = 0;
  CHECK_THROWS_WITH_AS(liftToAbsolute(quadric, e1, none), doctest::Contains("lift not found within bounds"),
                       SearchExhausted);

  auto i2 = loadInstance("i2-chain");
  auto rel = liftToAbsolute(i2, fromInts({1, 3}));
  CHECK(rel.m == 1);
  CHECK(rel.nu.empty());
  CHECK(sameVector(rel.liftedClass, fromInts({1, 3})));
}

TEST_CASE("buildK examples") {
  auto i2 = loadInstance("i2-chain");
  auto k0 = buildK(i2);
  CHECK(k0.cone == i2Chamber(i2, 0).nef);

  auto k2 = buildK(i2, interval(2, 3));
  CHECK(k2.cone == i2Chamber(i2, 2).nef);

  auto empty = buildK(i2, interval(3, 2));
  CHECK(empty.cone.isOrigin());

  CHECK_THROWS_WITH_AS(buildK(i2, SlicePolytope{{VectorQ::Constant(1, Rational(1)), Rational(4)}}),
                       doctest::Contains("boundedness certificate failed"), InputError);

  auto toy = loadInstance("toy-vertical");
  auto kt = buildK(toy);
  CHECK(kt.cone == relativeMovableCone(toy).base);
  REQUIRE(kt.fibralRanges.size() == 2);
  CHECK(kt.fibralRanges[0] == std::make_pair(Rational(0), Rational(1)));
}

TEST_CASE("buildK on quadric-net is bounded and movable") {
  auto inst = loadInstance("quadric-net");
  auto k = buildK(inst);
  CHECK(k.cone.isFullDimensional());
  CHECK(k.cone.lineality().size() == 1);
  auto mov = relativeMovableCone(inst);
  for (const auto& r : k.cone.rays()) CHECK(membership(mov, r, MembershipMode::Closed));
  // Reducing a sample into the Dirichlet cell lands in K.
  GroupContext ctx(inst);
  std::mt19937_64 rng(21);
  for (int i = 0; i < 40; ++i) CHECK(k.cone.contains(ctx.reducePoint(sampleMovablePoint(inst, rng)).point));
}

TEST_CASE("buildU on the i2 chain") {
  auto inst = loadInstance("i2-chain");
  std::vector<Chamber> targets;
  for (long k = 0; k <= 10; ++k) targets.push_back(i2Chamber(inst, k));
  auto u = buildU(inst, targets);
  CHECK(u.covering.size() == 1);
  REQUIRE(u.witnesses.size() == 11);
  CHECK(u.allVerified());
  for (std::size_t k = 0; k < u.witnesses.size(); ++k) {
    CHECK(u.witnesses[k].word.size() == k);
    CHECK(u.cone.contains(u.witnesses[k].u));
    CHECK(targets[k].nef.containsInInterior(u.witnesses[k].image));
  }
  auto toy = buildU(loadInstance("toy-vertical"));
  CHECK(toy.covering.size() == 1);
  CHECK(toy.allVerified());
}

TEST_CASE("buildU fails loudly when the chamber guard trips") {
  auto inst = loadInstance("i2-chain");
  Guards g;
  g.chambers = 0;
  CHECK_THROWS_AS(buildU(inst, std::nullopt, g), GuardTripped);
}
