#pragma once

#include <string>

#include "conelab/chamberwalk.hpp"
#include "conelab/json_io.hpp"
#include "conelab/varmodel.hpp"

namespace testing_support {

using namespace conelab;

inline Json bundledJson(const std::string& name) { return Json::parse(*bundledInstanceText(name)); }

inline VarietyInstance fromJson(const Json& doc, const std::string& label = "test") {
  return parseInstance(doc.dump(), label);
}

// i2-chain with the generator replaced by (x1, x2) -> (x1, x2 + k x1).
inline VarietyInstance i2WithStep(long k) {
  Json doc = bundledJson("i2-chain");
  doc["group_generators"][0]["matrix"] = Json::array({Json::array({"1", "0"}), Json::array({std::to_string(k), "1"})});
  doc["group_generators"][0]["label"] = "tau" + std::to_string(k);
  return fromJson(doc, "i2-chain-step" + std::to_string(k));
}

// Chamber k of the i2 chain, {k x1 <= x2 <= (k+1) x1}, reached by crossing walls from the seed.
inline Chamber i2Chamber(const VarietyInstance& inst, long k) {
  Chamber ch = seedChamber(inst);
  for (long step = 0; step < (k >= 0 ? k : -k); ++step) {
    const long cur = k >= 0 ? step : -step;
    // Upper wall of chamber j is (j+1, -1); lower wall is (-j, 1).
    VectorQ wall = k >= 0 ? fromInts({cur + 1, -1}) : fromInts({-cur, 1});
    ch = crossWall(inst, ch, wall);
  }
  return ch;
}

inline VectorQ q(std::initializer_list<const char*> xs) {
  VectorQ v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (const char* x : xs) v(i++) = parseRational(x);
  return v;
}

}  // namespace testing_support
