#include "conelab/exactq.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "conelab/errors.hpp"

namespace conelab {

Rational::Rational(const Integer& n, const Integer& d) {
  if (d == 0) throw InputError("rational with zero denominator");
  v_ = mpq_class(n, d);
  v_.canonicalize();
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.isZero()) throw InputError("division by zero");
  v_ /= o.v_;
  return *this;
}

Integer Rational::floor() const {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
  return q;
}

Integer Rational::ceil() const {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
  return q;
}

namespace {

bool parseInteger(std::string_view s, Integer& out) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (std::size_t k = i; k < s.size(); ++k)
    if (s[k] < '0' || s[k] > '9') return false;
  std::string digits(s[0] == '+' ? s.substr(1) : s);
  return out.set_str(digits, 10) == 0;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational Rational::parse(std::string_view text) {
  std::string_view s = trim(text);
  auto slash = s.find('/');
  Integer n, d = 1;
  if (slash == std::string_view::npos) {
    if (!parseInteger(s, n)) throw InputError("not a rational: '" + std::string(text) + "'");
  } else {
    if (!parseInteger(trim(s.substr(0, slash)), n) || !parseInteger(trim(s.substr(slash + 1)), d))
      throw InputError("not a rational: '" + std::string(text) + "'");
    if (d == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
  }
  return Rational(n, d);
}

Rational parseRational(std::string_view text) { return Rational::parse(text); }

// --- fraction-free Gauss-Jordan ---------------------------------------------

namespace {

using IntMat = std::vector<IntVec>;

Integer lcmOfDenominators(const MatrixQ& a, Index row) {
  Integer l = 1;
  for (Index j = 0; j < a.cols(); ++j) {
    Integer d = a(row, j).den();
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), d.get_mpz_t());
  }
  return l;
}

// Rows scaled by their denominator lcm; `scales` receives the factors.
IntMat integerRows(const MatrixQ& a, std::vector<Integer>* scales = nullptr) {
  IntMat m(a.rows(), IntVec(a.cols()));
  if (scales) scales->assign(a.rows(), 1);
  for (Index i = 0; i < a.rows(); ++i) {
    Integer l = lcmOfDenominators(a, i);
    if (scales) (*scales)[i] = l;
    for (Index j = 0; j < a.cols(); ++j) {
      Integer v = a(i, j).num() * (l / a(i, j).den());
      m[i][j] = v;
    }
  }
  return m;
}

struct Reduced {
  IntMat m;
  std::vector<Index> pivotCols;
  Integer pivot = 1;  // every pivot entry equals this value after reduction
  int swapSign = 1;
};

// Pivots only in columns [0, limit). Every division is exact.
Reduced gaussJordan(IntMat m, Index limit) {
  Reduced out;
  const Index rows = static_cast<Index>(m.size());
  const Index cols = rows ? static_cast<Index>(m[0].size()) : 0;
  Integer prev = 1;
  Index r = 0;
  Integer t;
  for (Index c = 0; c < limit && r < rows; ++c) {
    Index p = r;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    if (p != r) {
      std::swap(m[p], m[r]);
      out.swapSign = -out.swapSign;
    }
    const Integer piv = m[r][c];
    for (Index i = 0; i < rows; ++i) {
      if (i == r) continue;
      const Integer factor = m[i][c];
      for (Index j = 0; j < cols; ++j) {
        t = piv * m[i][j] - factor * m[r][j];
        mpz_divexact(m[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = piv;
    out.pivotCols.push_back(c);
    ++r;
  }
  out.pivot = prev;
  out.m = std::move(m);
  return out;
}

}  // namespace

namespace detail {

LinearSolution solveLinear(const MatrixQ& a, const VectorQ& b) {
  if (b.size() != a.rows())
    throw InputError("solveLinear: right-hand side has " + std::to_string(b.size()) +
                     " entries, matrix has " + std::to_string(a.rows()) + " rows");
  const Index n = a.cols();
  MatrixQ aug(a.rows(), n + 1);
  aug.leftCols(n) = a;
  aug.col(n) = b;
  Reduced red = gaussJordan(integerRows(aug), n);
  LinearSolution sol;
  const Index r = static_cast<Index>(red.pivotCols.size());
  for (Index k = r; k < a.rows(); ++k)
    if (red.m[k][n] != 0) {
      sol.kernel = kernelBasis(a);
      return sol;
    }
  VectorQ x = zeros(n);
  for (Index k = 0; k < r; ++k) x(red.pivotCols[k]) = Rational(red.m[k][n], red.pivot);
  sol.particular = x;
  sol.kernel = kernelBasis(a);
  return sol;
}

std::vector<VectorQ> kernelBasis(const MatrixQ& a) {
  const Index n = a.cols();
  Reduced red = gaussJordan(integerRows(a), n);
  std::vector<bool> isPivot(n, false);
  for (Index c : red.pivotCols) isPivot[c] = true;
  std::vector<VectorQ> basis;
  for (Index f = 0; f < n; ++f) {
    if (isPivot[f]) continue;
    VectorQ v = zeros(n);
    v(f) = Rational(red.pivot);
    for (std::size_t k = 0; k < red.pivotCols.size(); ++k) v(red.pivotCols[k]) = Rational(Integer(-red.m[k][f]));
    basis.push_back(primitive(v));
  }
  return basis;
}

Index rank(const MatrixQ& a) {
  return static_cast<Index>(gaussJordan(integerRows(a), a.cols()).pivotCols.size());
}

Rational determinant(const MatrixQ& a) {
  if (a.rows() != a.cols()) throw InputError("determinant of a non-square matrix");
  if (a.rows() == 0) return 1;
  std::vector<Integer> scales;
  Reduced red = gaussJordan(integerRows(a, &scales), a.cols());
  if (static_cast<Index>(red.pivotCols.size()) < a.rows()) return 0;
  Integer denom = 1;
  for (const auto& s : scales) denom *= s;
  return Rational(Integer(red.pivot * red.swapSign), denom);
}

std::optional<MatrixQ> inverse(const MatrixQ& a) {
  if (a.rows() != a.cols()) throw InputError("inverse of a non-square matrix");
  const Index n = a.rows();
  MatrixQ aug(n, 2 * n);
  aug.leftCols(n) = a;
  aug.rightCols(n) = identity(n);
  Reduced red = gaussJordan(integerRows(aug), n);
  if (static_cast<Index>(red.pivotCols.size()) < n) return std::nullopt;
  MatrixQ inv(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) inv(i, j) = Rational(red.m[i][n + j], red.pivot);
  return inv;
}

}  // namespace detail

// --- vector utilities -------------------------------------------------------

bool isZero(const VectorQ& v) {
  for (Index i = 0; i < v.size(); ++i)
    if (!v(i).isZero()) return false;
  return true;
}

bool isIntegral(const MatrixQ& m) {
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      if (!m(i, j).isInteger()) return false;
  return true;
}

VectorQ zeros(Index n) {
  VectorQ v(n);
  for (Index i = 0; i < n; ++i) v(i) = 0;
  return v;
}

VectorQ unit(Index n, Index i) {
  VectorQ v = zeros(n);
  v(i) = 1;
  return v;
}

VectorQ fromInts(std::initializer_list<long> xs) {
  VectorQ v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (long x : xs) v(i++) = x;
  return v;
}

MatrixQ identity(Index n) {
  MatrixQ m(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) m(i, j) = (i == j) ? 1 : 0;
  return m;
}

IntVec primitiveIntegral(const VectorQ& v) {
  Integer l = 1;
  for (Index i = 0; i < v.size(); ++i) {
    Integer d = v(i).den();
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), d.get_mpz_t());
  }
  IntVec out(v.size());
  Integer g = 0;
  for (Index i = 0; i < v.size(); ++i) {
    out[i] = v(i).num() * (l / v(i).den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), out[i].get_mpz_t());
  }
  if (g > 1)
    for (auto& x : out) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
  return out;
}

VectorQ toQ(const IntVec& v) {
  VectorQ out(static_cast<Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Index>(i)) = Rational(v[i]);
  return out;
}

VectorQ primitive(const VectorQ& v) { return toQ(primitiveIntegral(v)); }

VectorQ lineRepresentative(const VectorQ& v) {
  VectorQ p = primitive(v);
  for (Index i = 0; i < p.size(); ++i) {
    if (p(i).isZero()) continue;
    if (p(i).sign() < 0) p = -p;
    break;
  }
  return p;
}

bool lexLess(const VectorQ& a, const VectorQ& b) {
  const Index n = std::min(a.size(), b.size());
  for (Index i = 0; i < n; ++i) {
    if (a(i) < b(i)) return true;
    if (b(i) < a(i)) return false;
  }
  return a.size() < b.size();
}

bool sameVector(const VectorQ& a, const VectorQ& b) {
  if (a.size() != b.size()) return false;
  for (Index i = 0; i < a.size(); ++i)
    if (a(i) != b(i)) return false;
  return true;
}

bool positivelyProportional(const VectorQ& a, const VectorQ& b) {
  return sameVector(primitive(a), primitive(b));
}

MatrixQ rowsOf(const std::vector<VectorQ>& vs, Index cols) {
  MatrixQ m(static_cast<Index>(vs.size()), cols);
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (vs[i].size() != cols) throw InputError("vector of length " + std::to_string(vs[i].size()) +
                                               " where " + std::to_string(cols) + " was expected");
    m.row(static_cast<Index>(i)) = vs[i].transpose();
  }
  return m;
}

Index rankOf(const std::vector<VectorQ>& vs, Index dim) {
  if (vs.empty()) return 0;
  return detail::rank(rowsOf(vs, dim));
}

bool inSpan(const VectorQ& v, const std::vector<VectorQ>& basis) {
  if (isZero(v)) return true;
  if (basis.empty()) return false;
  auto vs = basis;
  const Index r = rankOf(vs, v.size());
  vs.push_back(v);
  return rankOf(vs, v.size()) == r;
}

std::vector<std::size_t> independentSubset(const std::vector<VectorQ>& vs, Index dim) {
  std::vector<std::size_t> keep;
  std::vector<VectorQ> chosen;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    chosen.push_back(vs[i]);
    if (rankOf(chosen, dim) == static_cast<Index>(chosen.size()))
      keep.push_back(i);
    else
      chosen.pop_back();
  }
  return keep;
}

std::vector<VectorQ> canonicalSpanBasis(const std::vector<VectorQ>& vs, Index dim) {
  if (vs.empty()) return {};
  Reduced red = gaussJordan(integerRows(rowsOf(vs, dim)), dim);
  std::vector<VectorQ> out;
  for (std::size_t k = 0; k < red.pivotCols.size(); ++k) {
    VectorQ row(dim);
    for (Index j = 0; j < dim; ++j) row(j) = Rational(red.m[k][j]);
    out.push_back(lineRepresentative(row));
  }
  return out;
}

std::vector<VectorQ> orthogonalComplement(const std::vector<VectorQ>& vs, Index dim) {
  if (vs.empty()) {
    std::vector<VectorQ> out;
    for (Index i = 0; i < dim; ++i) out.push_back(unit(dim, i));
    return out;
  }
  return detail::kernelBasis(rowsOf(vs, dim));
}

VectorQ projectOff(const VectorQ& v, const std::vector<VectorQ>& basis) {
  if (basis.empty()) return v;
  const Index k = static_cast<Index>(basis.size());
  MatrixQ b = rowsOf(basis, v.size());
  MatrixQ gram = b * b.transpose();
  VectorQ rhs = b * v;
  LinearSolution s = detail::solveLinear(gram, rhs);
  if (!s.consistent()) throw InputError("projectOff: degenerate basis");
  VectorQ out = v;
  for (Index i = 0; i < k; ++i) out -= (*s.particular)(i) * basis[static_cast<std::size_t>(i)];
  return out;
}

std::string formatVector(const VectorQ& v) {
  std::string s;
  for (Index i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += v(i).str();
  }
  return s;
}

VectorQ parseVector(std::string_view csv) {
  std::vector<Rational> xs;
  std::size_t start = 0;
  while (true) {
    auto comma = csv.find(',', start);
    xs.push_back(parseRational(csv.substr(start, comma == std::string_view::npos ? csv.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  VectorQ v(static_cast<Index>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) v(static_cast<Index>(i)) = xs[i];
  return v;
}

}  // namespace conelab
