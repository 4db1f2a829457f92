#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "conelab/exactq.hpp"

namespace conelab {

using Json = nlohmann::json;

// Readers throw ParseError naming the JSON path (e.g. "/pairing/1/0").
Rational rationalFromJson(const Json& j, const std::string& path);
VectorQ vectorFromJson(const Json& j, const std::string& path, Index expectedSize = -1);
MatrixQ matrixFromJson(const Json& j, const std::string& path, Index rows = -1, Index cols = -1);
std::vector<VectorQ> vectorListFromJson(const Json& j, const std::string& path, Index expectedSize);

// Writers emit every rational as a "p/q" string ("p" when q = 1).
Json toJson(const Rational& q);
Json toJson(const VectorQ& v);
Json toJson(const MatrixQ& m);
Json toJson(const std::vector<VectorQ>& vs);

}  // namespace conelab
