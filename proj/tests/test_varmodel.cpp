#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>

#include "conelab/chamberwalk.hpp"
#include "conelab/errors.hpp"
#include "support.hpp"

using namespace conelab;
using testing_support::bundledJson;
using testing_support::fromJson;

namespace {

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

// Chow ring of P^3 blown up at 8 points, truncated to codimension <= 2: a divisor
// aH - sum b_i E_i squares to a^2 l - sum b_i^2 e_i (H^2 = l, E_i^2 = -e_i, H.E_i = 0).
VectorQ squareOfDivisor(const VectorQ& hCoeffs) {
  VectorQ out(9);
  out(0) = hCoeffs(0) * hCoeffs(0);
  for (Index i = 1; i < 9; ++i) out(i) = -(hCoeffs(i) * hCoeffs(i));
  return out;
}

std::string violationsOf(const Json& doc) {
  try {
    loadAndValidate(doc.dump(), "mutated");
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

std::vector<std::string> violationListOf(const Json& doc) {
  try {
    loadAndValidate(doc.dump(), "mutated");
  } catch (const ValidationError& e) {
    return e.violations();
  }
  return {};
}

}  // namespace

TEST_CASE("bundled instances parse and validate cleanly") {
  for (const auto& name : bundledInstanceNames()) {
    CAPTURE(name);
    auto inst = loadInstance(name);
    CHECK(validateInstance(inst).empty());
    CHECK(inst.label == name);
  }
  CHECK(bundledInstanceNames().size() == 3);
}

TEST_CASE("toy-vertical arithmetic") {
  auto inst = loadInstance("toy-vertical");
  const auto& f = inst.fibration;
  CHECK(inst.verticalCount() == 2);
  CHECK(f.partition.size() == 1);
  CHECK(f.m == std::vector<Integer>{1, 1});
  CHECK(sameVector(VectorQ(f.fibral[0] + f.fibral[1]), f.fibre));
  CHECK(inst.lattice.pair(f.vertical[0], f.fibral[0]) == Rational(-1));
  CHECK(trivialSubspace(inst).basis.empty());
}

TEST_CASE("quadric-net lattice data agrees with blowup intersection theory") {
  auto inst = loadInstance("quadric-net");
  CHECK(inst.rank() == 9);
  CHECK_FALSE(inst.isRelative);
  // -K/2 = 2H - sum E_i; its self-intersection is the fibre.
  VectorQ halfAnti = fromInts({2, 1, 1, 1, 1, 1, 1, 1, 1});
  CHECK(sameVector(squareOfDivisor(halfAnti), inst.fibration.fibre));
  CHECK(sameVector(VectorQ(inst.canonicalClass * Rational(-1, 2)), fromInts({2, -1, -1, -1, -1, -1, -1, -1, -1})));
  // H.l = 1, E_i.e_i = -1 (e_i a line in E_i = P^2 with normal bundle O(-1)).
  for (Index i = 0; i < 9; ++i)
    for (Index j = 0; j < 9; ++j)
      CHECK(inst.lattice.pairing(i, j) == Rational(i != j ? 0 : (i == 0 ? 1 : -1)));
  // Every wall class ell - e_i - e_j is K-trivial and pairs to 0 with -K/2.
  for (int i = 1; i <= 8; ++i)
    for (int j = i + 1; j <= 8; ++j) {
      VectorQ c = unit(9, 0) - unit(9, i) - unit(9, j);
      CHECK(inst.lattice.pair(inst.canonicalClass, c).isZero());
      CHECK(inst.lattice.pair(inst.fibration.amplePullbacks[0], c).isZero());
    }
}

TEST_CASE("quadric-net has exactly C(8,2) reducible fibres") {
  auto inst = loadInstance("quadric-net");
  auto pairs = fibralDecompositionPairs(inst);
  CHECK(pairs.size() == 28);
  // Independent recount: unordered index pairs in the seed frame whose classes sum to F.
  const auto& frame = inst.seed.wallFrame;
  std::size_t count = 0;
  for (std::size_t a = 0; a < frame.size(); ++a)
    for (std::size_t b = a + 1; b < frame.size(); ++b)
      if (sameVector(VectorQ(frame[a] + frame[b]), inst.fibration.fibre)) ++count;
  CHECK(count == 28);
  // Each pair is {l - e_i - e_j, F - (l - e_i - e_j)} for a distinct i < j.
  std::map<std::pair<int, int>, int> seen;
  for (const auto& [u, v] : pairs) {
    const VectorQ& c = u(0) == Rational(1) ? u : v;
    std::vector<int> neg;
    for (int i = 1; i <= 8; ++i)
      if (c(i) == Rational(-1)) neg.push_back(i);
    REQUIRE(neg.size() == 2);
    CHECK(sameVector(c, VectorQ(unit(9, 0) - unit(9, neg[0]) - unit(9, neg[1]))));
    ++seen[{neg[0], neg[1]}];
  }
  CHECK(seen.size() == 28);
}

TEST_CASE("trivial subspace examples") {
  SUBCASE("quadric-net: T is the pullback of a line") {
    auto inst = loadInstance("quadric-net");
    auto t = trivialSubspace(inst);
    REQUIRE(t.basis.size() == 1);
    VectorQ expected = fromInts({2, -1, -1, -1, -1, -1, -1, -1, -1});
    CHECK(sameVector(lineRepresentative(t.basis[0]), expected));
    // Oracle: the kernel of the pairing against F and every frame class.
    std::vector<VectorQ> rows;
    rows.push_back(inst.lattice.functional(inst.fibration.fibre));
    for (const auto& c : inst.seed.wallFrame) rows.push_back(inst.lattice.functional(c));
    auto k = kernelBasis(rowsOf(rows, 9));
    REQUIRE(k.size() == 1);
    CHECK(sameVector(lineRepresentative(k[0]), expected));
    CHECK(t.quotient.cols() == 9);
    CHECK(isZero(VectorQ(t.quotient * expected)));
  }
  SUBCASE("a single fibral class leaves rank - 1 dimensions") {
    Json doc = bundledJson("i2-chain");
    doc["seed_chamber"]["wall_frame"] = Json::array({Json::array({"1", "0"})});
    doc["seed_chamber"]["blocks"] = Json::array({Json::array({0})});
    auto inst = fromJson(doc);
    CHECK(trivialSubspace(inst).basis.size() == 1);
  }
}

TEST_CASE("trivial subspace is unchanged by flopping the frame") {
  for (const char* name : {"i2-chain", "quadric-net"}) {
    CAPTURE(name);
    auto inst = loadInstance(name);
    auto before = trivialSubspace(inst);
    Chamber seed = seedChamber(inst);
    auto walls = crossableWalls(inst, seed);
    REQUIRE_FALSE(walls.empty());
    for (std::size_t k = 0; k < std::min<std::size_t>(walls.size(), 6); ++k) {
      Chamber next = crossWall(inst, seed, walls[k]);
      auto after = trivialSubspace(inst, next.wallFrame);
      CHECK(canonicalSpanBasis(before.basis, inst.rank()) == canonicalSpanBasis(after.basis, inst.rank()));
      // Applying the flop map to the frame directly gives the same subspace.
      MatrixQ t = inst.flopRule.mapFor(walls[k]);
      std::vector<VectorQ> mapped;
      for (const auto& c : inst.seed.wallFrame) mapped.push_back(t * c);
      CHECK(canonicalSpanBasis(trivialSubspace(inst, mapped).basis, inst.rank()) ==
            canonicalSpanBasis(before.basis, inst.rank()));
    }
  }
}

TEST_CASE("fibral classes span the dual of the vertical divisors") {
  for (const auto& name : bundledInstanceNames()) {
    CAPTURE(name);
    auto inst = loadInstance(name);
    const auto& f = inst.fibration;
    const Index n = static_cast<Index>(f.vertical.size());
    auto gens = fibralGenerators(inst, inst.seed.wallFrame);
    MatrixQ onFibral(n, static_cast<Index>(f.fibral.size()));
    MatrixQ onAll(n, static_cast<Index>(gens.size()));
    for (Index i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < f.fibral.size(); ++j)
        onFibral(i, static_cast<Index>(j)) = inst.lattice.pair(f.vertical[i], f.fibral[j]);
      for (std::size_t j = 0; j < gens.size(); ++j)
        onAll(i, static_cast<Index>(j)) = inst.lattice.pair(f.vertical[i], gens[j]);
    }
    CHECK(rank(onFibral) == rank(onAll));
  }
}

// Integrality is required on the block the map is applied to; a reflection form
// with <c,c> = -2 and <F,c> = 0 on every quadric wall cannot be integral on all of N_1.
TEST_CASE("flop rule maps are involutions fixing F and integral on the frame") {
  for (const auto& name : bundledInstanceNames()) {
    auto inst = loadInstance(name);
    for (std::size_t i = 0; i < inst.seed.wallFrame.size(); ++i) {
      const VectorQ& c = inst.seed.wallFrame[i];
      MatrixQ t;
      try {
        t = inst.flopRule.mapFor(c);
      } catch (const InputError&) {
        continue;  // divisorial walls need no map
      }
      CAPTURE(name);
      CAPTURE(formatVector(c));
      CHECK(sameVector(VectorQ(t * c), VectorQ(-c)));
      CHECK(sameVector(VectorQ(t * inst.fibration.fibre), inst.fibration.fibre));
      CHECK(t * t == identity(inst.rank()));
      for (const auto& block : inst.seed.blocks)
        if (std::find(block.begin(), block.end(), i) != block.end())
          for (std::size_t j : block) CHECK(isIntegral(VectorQ(t * inst.seed.wallFrame[j])));
    }
  }
}

TEST_CASE("i2-chain reflection example") {
  auto inst = loadInstance("i2-chain");
  MatrixQ t = inst.flopRule.mapFor(fromInts({1, -1}));
  CHECK(sameVector(VectorQ(t * fromInts({0, 1})), fromInts({2, -1})));
  CHECK(sameVector(VectorQ(t * fromInts({1, -1})), fromInts({-1, 1})));
  CHECK(sameVector(VectorQ(t * fromInts({1, 0})), fromInts({1, 0})));
}

TEST_CASE("validation reports every violated identity") {
  SUBCASE("toy-vertical with D1.F1 flipped to +1") {
    Json doc = bundledJson("toy-vertical");
    doc["vertical_divisors"][0] = Json::array({"1", "1"});
    auto v = violationListOf(doc);
    CHECK(contains(v, "D_i·F_i < 0 violated at i=1"));
    CHECK(v.size() > 1);
  }
  SUBCASE("multiplicities not summing to F") {
    Json doc = bundledJson("toy-vertical");
    doc["multiplicities_m"] = Json::array({2, 1});
    CHECK(contains(violationListOf(doc), "Σ m_i F_i ≠ F in partition member 1"));
  }
  SUBCASE("degenerate pairing") {
    Json doc = bundledJson("i2-chain");
    doc["pairing"] = Json::array({Json::array({"1", "1"}), Json::array({"1", "1"})});
    CHECK(contains(violationListOf(doc), "pairing is degenerate"));
  }
  SUBCASE("seed frame not summing to F") {
    Json doc = bundledJson("i2-chain");
    doc["seed_chamber"]["wall_frame"][1] = Json::array({"1", "-2"});
    CHECK(contains(violationListOf(doc), "seed frame block 1 does not sum to F"));
  }
  SUBCASE("K-positive ray listed as K-negative") {
    Json doc = bundledJson("quadric-net");
    doc["k_negative_rays"][8]["curve"] = Json::array({"-1", "1", "0", "0", "0", "0", "0", "0", "0"});
    CHECK(contains(violationListOf(doc), "K·c < 0 violated at k-negative ray 9"));
  }
  SUBCASE("bad group generator") {
    Json doc = bundledJson("i2-chain");
    doc["group_generators"][0]["matrix"] = Json::array({Json::array({"2", "0"}), Json::array({"0", "1"})});
    CHECK(violationsOf(doc).find("group generator tau") != std::string::npos);
  }
}

TEST_CASE("parse errors name the JSON path") {
  auto pathOf = [](const Json& doc) -> std::string {
    try {
      parseInstance(doc.dump());
    } catch (const ParseError& e) {
      return e.path();
    }
    return "<no error>";
  };
  Json doc = bundledJson("i2-chain");
  doc["pairing"][1][0] = "x/y";
  CHECK(pathOf(doc) == "/pairing/1/0");

  doc = bundledJson("i2-chain");
  doc["surprise"] = 1;
  CHECK(pathOf(doc) == "/surprise");

  doc = bundledJson("i2-chain");
  doc.erase("fibre_class");
  CHECK(pathOf(doc) == "/fibre_class");

  doc = bundledJson("quadric-net");
  doc["k_negative_rays"][0]["mori_type"] = 7;
  CHECK(pathOf(doc) == "/k_negative_rays/0/mori_type");

  doc = bundledJson("toy-vertical");
  doc["multiplicities_m"][0] = "1/2";
  CHECK(pathOf(doc) == "/multiplicities_m/0");

  CHECK_THROWS_AS(parseInstance("{not json"), ParseError);
  CHECK_THROWS_AS(loadInstance("no-such-instance"), InputError);
}

TEST_CASE("parsed instance round-trips through the JSON writer") {
  auto inst = loadInstance("quadric-net");
  Json doc = bundledJson("quadric-net");
  CHECK(toJson(inst.lattice.pairing) == doc["pairing"]);
  CHECK(toJson(inst.fibration.fibre) == doc["fibre_class"]);
  CHECK(toJson(inst.seed.wallFrame) == doc["seed_chamber"]["wall_frame"]);
}
