#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <random>

#include "conelab/chamberwalk.hpp"
#include "conelab/errors.hpp"
#include "support.hpp"

using namespace conelab;
using testing_support::i2Chamber;
using testing_support::i2WithStep;
using testing_support::q;

namespace {

std::vector<VectorQ> sorted(std::vector<VectorQ> v) {
  std::sort(v.begin(), v.end(), lexLess);
  return v;
}

void checkFrameSums(const VarietyInstance& inst, const Chamber& ch) {
  for (const auto& block : ch.blocks) {
    VectorQ sum = zeros(inst.rank());
    for (std::size_t j : block) sum += ch.wallFrame[j];
    CHECK(sameVector(sum, inst.fibration.fibre));
  }
  for (const auto& c : ch.wallFrame) CHECK(sameVector(c, primitive(c)));
}

PolyCone sigmaOf(std::initializer_list<VectorQ> rays) { return PolyCone::fromGenerators(std::vector<VectorQ>(rays), 2); }

}  // namespace

TEST_CASE("movablePrecheck examples") {
  auto quadric = loadInstance("quadric-net");
  auto ok = movablePrecheck(quadric, fromInts({2, -1, -1, -1, -1, -1, -1, -1, -1}));
  CHECK(ok.ok);
  CHECK_FALSE(ok.witness);

  auto bad = movablePrecheck(quadric, fromInts({-1, 0, 0, 0, 0, 0, 0, 0, 0}));
  CHECK_FALSE(bad.ok);
  REQUIRE(bad.witness);
  CHECK(quadric.lattice.pair(fromInts({-1, 0, 0, 0, 0, 0, 0, 0, 0}), *bad.witness).sign() < 0);
  CHECK((*bad.witness)(0) == Rational(1));  // a line class l - e_i

  auto toy = loadInstance("toy-vertical");
  CHECK(movablePrecheck(toy, fromInts({-5, 3})).ok);
  CHECK_THROWS_AS(movablePrecheck(toy, fromInts({1, 2, 3})), InputError);
}

TEST_CASE("crossWall examples") {
  auto inst = loadInstance("i2-chain");
  Chamber c0 = seedChamber(inst);
  Chamber c1 = crossWall(inst, c0, fromInts({1, -1}));
  CHECK(sorted(c1.wallFrame) == sorted({fromInts({-1, 1}), fromInts({2, -1})}));
  CHECK(c1.path.size() == 1);
  CHECK(c1.nef == PolyCone::fromGenerators({fromInts({1, 1}), fromInts({1, 2})}, 2));

  Chamber back = crossWall(inst, c1, fromInts({-1, 1}));
  CHECK(back.wallFrame == c0.wallFrame);
  CHECK(back.key() == c0.key());

  CHECK_THROWS_WITH_AS(crossWall(inst, c0, fromInts({2, -1})), "not a wall of the chamber", InputError);

  auto toy = loadInstance("toy-vertical");
  Chamber t0 = seedChamber(toy);
  CHECK(crossableWalls(toy, t0).empty());
  CHECK_THROWS_WITH_AS(crossWall(toy, t0, fromInts({1, 0})), "boundary wall", InputError);
  CHECK_THROWS_WITH_AS(crossWall(toy, t0, fromInts({0, 1})), "boundary wall", InputError);
}

TEST_CASE("crossing shares exactly the wall facet") {
  for (const char* name : {"i2-chain", "quadric-net"}) {
    CAPTURE(name);
    auto inst = loadInstance(name);
    Chamber seed = seedChamber(inst);
    auto walls = crossableWalls(inst, seed);
    for (std::size_t k = 0; k < std::min<std::size_t>(walls.size(), 4); ++k) {
      Chamber next = crossWall(inst, seed, walls[k]);
      PolyCone meet = intersect(seed.nef, next.nef);
      CHECK(meet == seed.nef.face(inst.lattice.functional(walls[k])));
      CHECK(meet.dimension() == inst.rank() - 1);
      CHECK(std::any_of(next.wallFrame.begin(), next.wallFrame.end(),
                        [&](const VectorQ& c) { return sameVector(c, VectorQ(-walls[k])); }));
    }
  }
}

TEST_CASE("random crossing sequences keep frames consistent and invert exactly") {
  std::mt19937_64 rng(17);
  for (const char* name : {"i2-chain", "quadric-net"}) {
    CAPTURE(name);
    auto inst = loadInstance(name);
    Chamber seed = seedChamber(inst);
    for (int trial = 0; trial < 6; ++trial) {
      Chamber ch = seed;
      for (int step = 0; step < 5; ++step) {
        auto walls = crossableWalls(inst, ch);
        if (walls.empty()) break;
        std::uniform_int_distribution<std::size_t> pick(0, walls.size() - 1);
        ch = crossWall(inst, ch, walls[pick(rng)]);
        checkFrameSums(inst, ch);
        CHECK(ch.nef.isFullDimensional());
      }
      // Undo the path with the inverse maps (each flop map is an involution).
      std::vector<VectorQ> frame = ch.wallFrame;
      for (auto it = ch.path.rbegin(); it != ch.path.rend(); ++it) {
        std::size_t idx = frame.size();
        for (std::size_t i = 0; i < frame.size(); ++i)
          if (sameVector(frame[i], VectorQ(-*it))) idx = i;
        REQUIRE(idx < frame.size());
        MatrixQ t = inst.flopRule.mapFor(*it);
        for (const auto& block : ch.blocks)
          if (std::find(block.begin(), block.end(), idx) != block.end())
            for (std::size_t j : block) frame[j] = t * frame[j];
      }
      CHECK(frame == seed.wallFrame);
    }
  }
}

TEST_CASE("makeNef examples") {
  auto inst = loadInstance("i2-chain");
  auto run = [&](const VectorQ& d) { return makeNef(inst, d); };

  auto r = run(fromInts({2, 3}));
  CHECK(r.path.size() == 1);
  CHECK(r.chamber.nef.contains(fromInts({2, 3})));

  r = run(q({"1", "7/2"}));
  CHECK(r.path.size() == 3);
  CHECK(r.chamber.key() == i2Chamber(inst, 3).key());

  CHECK(run(q({"1", "1/2"})).path.empty());
  CHECK(run(q({"1", "-5/2"})).chamber.key() == i2Chamber(inst, -3).key());

  // On a wall: no crossing of walls with D.c = 0.
  CHECK(run(fromInts({1, 1})).path.empty());
  CHECK(run(fromInts({1, 2})).path.size() == 1);

  Guards tight;
  tight.flops = 2;
  CHECK_THROWS_AS(makeNef(inst, q({"1", "7/2"}), tight), GuardTripped);
  CHECK_NOTHROW(makeNef(inst, q({"1", "5/2"}), tight));

  CHECK_THROWS_AS(run(fromInts({-1, 0})), PreconditionError);
  CHECK_THROWS_AS(run(fromInts({0, 1})), PreconditionError);
}

TEST_CASE("makeNef result always contains the divisor") {
  auto inst = loadInstance("i2-chain");
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> num(-200, 200), den(1, 9);
  for (int i = 0; i < 100; ++i) {
    VectorQ d(2);
    d(0) = Rational(den(rng));
    d(1) = Rational(num(rng), den(rng));
    auto r = makeNef(inst, d);
    CHECK(r.chamber.nef.contains(d));
    // Chamber k is {k <= x2/x1 <= k+1}; the walk stops at the first chamber containing D.
    const Rational ratio = d(1) / d(0);
    const long fl = ratio.floor().get_si();
    const long expected = ratio.sign() < 0 ? -fl : (ratio.isInteger() && fl > 0 ? fl - 1 : fl);
    CHECK(static_cast<long>(r.path.size()) == expected);
  }
}

TEST_CASE("makeNef on quadric-net") {
  auto inst = loadInstance("quadric-net");
  VectorQ h = unit(9, 0);
  auto r = makeNef(inst, h);
  CHECK(r.chamber.nef.contains(h));
  CHECK_THROWS_AS(makeNef(inst, VectorQ(-h)), PreconditionError);
}

TEST_CASE("enumerateChambers examples") {
  auto inst = loadInstance("i2-chain");
  auto five = enumerateChambers(inst, sigmaOf({fromInts({1, 0}), fromInts({1, 5})}));
  REQUIRE(five.chambers.size() == 5);
  for (std::size_t a = 0; a < 5; ++a)
    for (std::size_t b = a + 1; b < 5; ++b) CHECK(intersect(five.chambers[a].nef, five.chambers[b].nef).dimension() <= 1);
  std::vector<std::string> keys, expected;
  for (const auto& c : five.chambers) keys.push_back(c.key());
  for (long k = 0; k < 5; ++k) expected.push_back(i2Chamber(inst, k).key());
  std::sort(keys.begin(), keys.end());
  std::sort(expected.begin(), expected.end());
  CHECK(keys == expected);

  CHECK(enumerateChambers(inst, sigmaOf({q({"1", "1/2"})})).chambers.size() == 1);
  CHECK(enumerateChambers(inst, sigmaOf({fromInts({1, -3}), fromInts({1, 3})})).chambers.size() == 6);

  auto toy = loadInstance("toy-vertical");
  CHECK(enumerateChambers(toy, sigmaOf({fromInts({1, 0}), fromInts({0, 1})})).chambers.size() == 1);

  CHECK_THROWS_AS(enumerateChambers(inst, sigmaOf({fromInts({-1, 0}), fromInts({1, 1})})), PreconditionError);

  Guards tight;
  tight.chambers = 3;
  CHECK_THROWS_AS(enumerateChambers(inst, sigmaOf({fromInts({1, 0}), fromInts({1, 5})}), tight), GuardTripped);
}

TEST_CASE("sampled points of Sigma land in an enumerated chamber") {
  auto inst = loadInstance("i2-chain");
  auto sigma = sigmaOf({fromInts({1, -2}), q({"1", "9/2"})});
  auto en = enumerateChambers(inst, sigma);
  CHECK(en.chambers.size() == 7);
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> a(0, 60), b(0, 60);
  for (int i = 0; i < 200; ++i) {
    VectorQ x = sigma.rays()[0] * Rational(a(rng) + 1) + sigma.rays()[1] * Rational(b(rng));
    CHECK(std::any_of(en.chambers.begin(), en.chambers.end(), [&](const Chamber& c) { return c.nef.contains(x); }));
  }
}

TEST_CASE("enumerateUpToGroup") {
  auto one = enumerateUpToGroup(loadInstance("i2-chain"), 100);
  CHECK(one.representatives.size() == 1);
  CHECK(one.complete);
  CHECK(one.reductionExact);

  auto two = enumerateUpToGroup(i2WithStep(2), 100);
  CHECK(two.representatives.size() == 2);
  CHECK(two.complete);

  auto toy = enumerateUpToGroup(loadInstance("toy-vertical"), 100);
  CHECK(toy.representatives.size() == 1);
  CHECK(toy.complete);

  auto cut = enumerateUpToGroup(i2WithStep(3), 1);
  CHECK_FALSE(cut.complete);
}

TEST_CASE("guards read from the environment") {
  ::setenv("CONELAB_GUARD_FLOPS", "5", 1);
  ::setenv("CONELAB_GUARD_CHAMBERS", "7", 1);
  auto g = Guards::fromEnvironment();
  CHECK(g.flops == 5);
  CHECK(g.chambers == 7);
  ::setenv("CONELAB_GUARD_FLOPS", "many", 1);
  CHECK_THROWS_AS(Guards::fromEnvironment(), InputError);
  ::unsetenv("CONELAB_GUARD_FLOPS");
  ::unsetenv("CONELAB_GUARD_CHAMBERS");
  auto d = Guards::fromEnvironment();
  CHECK(d.flops == 10000);
  CHECK(d.chambers == 100000);
}
