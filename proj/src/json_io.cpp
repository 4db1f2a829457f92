#include "conelab/json_io.hpp"

#include "conelab/errors.hpp"

namespace conelab {

Rational rationalFromJson(const Json& j, const std::string& path) {
  if (j.is_string()) {
    try {
      return parseRational(j.get<std::string>());
    } catch (const InputError& e) {
      throw ParseError(path, e.what());
    }
  }
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw ParseError(path, "expected a rational string \"p/q\"");
}

VectorQ vectorFromJson(const Json& j, const std::string& path, Index expectedSize) {
  if (!j.is_array()) throw ParseError(path, "expected an array");
  if (expectedSize >= 0 && static_cast<Index>(j.size()) != expectedSize)
    throw ParseError(path, "expected " + std::to_string(expectedSize) + " entries, found " + std::to_string(j.size()));
  VectorQ v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v(static_cast<Index>(i)) = rationalFromJson(j[i], path + "/" + std::to_string(i));
  return v;
}

MatrixQ matrixFromJson(const Json& j, const std::string& path, Index rows, Index cols) {
  if (!j.is_array()) throw ParseError(path, "expected an array of rows");
  if (rows >= 0 && static_cast<Index>(j.size()) != rows)
    throw ParseError(path, "expected " + std::to_string(rows) + " rows, found " + std::to_string(j.size()));
  const Index r = static_cast<Index>(j.size());
  if (r == 0) return MatrixQ(0, cols < 0 ? 0 : cols);
  const Index c = cols >= 0 ? cols : static_cast<Index>(j[0].is_array() ? j[0].size() : 0);
  MatrixQ m(r, c);
  for (Index i = 0; i < r; ++i)
    m.row(i) = vectorFromJson(j[i], path + "/" + std::to_string(i), c).transpose();
  return m;
}

std::vector<VectorQ> vectorListFromJson(const Json& j, const std::string& path, Index expectedSize) {
  if (!j.is_array()) throw ParseError(path, "expected an array of vectors");
  std::vector<VectorQ> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(vectorFromJson(j[i], path + "/" + std::to_string(i), expectedSize));
  return out;
}

Json toJson(const Rational& q) { return q.str(); }

Json toJson(const VectorQ& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i).str());
  return out;
}

Json toJson(const MatrixQ& m) {
  Json out = Json::array();
  for (Index i = 0; i < m.rows(); ++i) out.push_back(toJson(VectorQ(m.row(i).transpose())));
  return out;
}

Json toJson(const std::vector<VectorQ>& vs) {
  Json out = Json::array();
  for (const auto& v : vs) out.push_back(toJson(v));
  return out;
}

}  // namespace conelab
