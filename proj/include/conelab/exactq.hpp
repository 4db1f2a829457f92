#pragma once

#include <gmpxx.h>

#include <Eigen/Core>
#include <concepts>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace conelab {

using Integer = mpz_class;

// Exact rational scalar. Always kept in canonical form (gcd(num, den) = 1, den > 0).
class Rational {
 public:
  Rational() = default;
  template <std::integral I>
  Rational(I v) : v_(static_cast<long>(v)) {}
  Rational(const Integer& n) : v_(n) {}
  Rational(const Integer& n, const Integer& d);
  explicit Rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }

  static Rational parse(std::string_view text);
  std::string str() const { return v_.get_str(); }

  Integer num() const { return v_.get_num(); }
  Integer den() const { return v_.get_den(); }
  int sign() const { return sgn(v_); }
  bool isZero() const { return sgn(v_) == 0; }
  bool isInteger() const { return v_.get_den() == 1; }
  double toDouble() const { return v_.get_d(); }
  Integer floor() const;
  Integer ceil() const;
  const mpq_class& raw() const { return v_; }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.v_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

  friend std::ostream& operator<<(std::ostream& os, const Rational& q) { return os << q.str(); }

 private:
  mpq_class v_;
};

inline Rational abs(const Rational& q) { return q.sign() < 0 ? -q : q; }

}  // namespace conelab

namespace Eigen {
template <>
struct NumTraits<conelab::Rational> : GenericNumTraits<conelab::Rational> {
  using Real = conelab::Rational;
  using NonInteger = conelab::Rational;
  using Nested = conelab::Rational;
  using Literal = conelab::Rational;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 20,
    MulCost = 40
  };
  static Real epsilon() { return Real(0); }
  static Real dummy_precision() { return Real(0); }
  static int digits10() { return 0; }
};
}  // namespace Eigen

namespace conelab {

using Index = Eigen::Index;
using VectorQ = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;
using MatrixQ = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
using IntVec = std::vector<Integer>;

Rational parseRational(std::string_view text);

// Solution set of A x = b. `particular` is empty when the system is inconsistent;
// `kernel` is a basis of ker A either way.
struct LinearSolution {
  std::optional<VectorQ> particular;
  std::vector<VectorQ> kernel;
  bool consistent() const { return particular.has_value(); }
  bool unique() const { return particular.has_value() && kernel.empty(); }
};

namespace detail {
LinearSolution solveLinear(const MatrixQ& a, const VectorQ& b);
std::vector<VectorQ> kernelBasis(const MatrixQ& a);
Index rank(const MatrixQ& a);
Rational determinant(const MatrixQ& a);
std::optional<MatrixQ> inverse(const MatrixQ& a);
}  // namespace detail

template <typename DA, typename DB>
LinearSolution solveLinear(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  return detail::solveLinear(MatrixQ(a), VectorQ(b));
}

// Basis of ker A, one vector per free column in increasing column order, each primitive integral.
template <typename D>
std::vector<VectorQ> kernelBasis(const Eigen::MatrixBase<D>& a) {
  return detail::kernelBasis(MatrixQ(a));
}

template <typename D>
Index rank(const Eigen::MatrixBase<D>& a) {
  return detail::rank(MatrixQ(a));
}

template <typename D>
Rational determinant(const Eigen::MatrixBase<D>& a) {
  return detail::determinant(MatrixQ(a));
}

template <typename D>
std::optional<MatrixQ> inverse(const Eigen::MatrixBase<D>& a) {
  return detail::inverse(MatrixQ(a));
}

// --- vector utilities -------------------------------------------------------

template <typename DA, typename DB>
Rational dot(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  Rational s = 0;
  for (Index i = 0; i < a.size(); ++i) s += a(i) * b(i);
  return s;
}

bool isZero(const VectorQ& v);
bool isIntegral(const MatrixQ& m);
VectorQ zeros(Index n);
VectorQ unit(Index n, Index i);
VectorQ fromInts(std::initializer_list<long> xs);
MatrixQ identity(Index n);

// Positive multiple of v that is integral with coprime entries. Zero stays zero.
IntVec primitiveIntegral(const VectorQ& v);
VectorQ primitive(const VectorQ& v);
VectorQ toQ(const IntVec& v);
// Primitive, with the first nonzero entry positive; canonical representative of a line.
VectorQ lineRepresentative(const VectorQ& v);

bool lexLess(const VectorQ& a, const VectorQ& b);
bool sameVector(const VectorQ& a, const VectorQ& b);
bool positivelyProportional(const VectorQ& a, const VectorQ& b);

// Stack vectors as rows of a matrix with `cols` columns.
MatrixQ rowsOf(const std::vector<VectorQ>& vs, Index cols);
Index rankOf(const std::vector<VectorQ>& vs, Index dim);
bool inSpan(const VectorQ& v, const std::vector<VectorQ>& basis);
// Greedy: indices of vectors each independent of the previously kept ones.
std::vector<std::size_t> independentSubset(const std::vector<VectorQ>& vs, Index dim);
// Reduced-row-echelon basis of span(vs), rows made primitive. Canonical for the subspace.
std::vector<VectorQ> canonicalSpanBasis(const std::vector<VectorQ>& vs, Index dim);
// Orthogonal complement {x : x.v = 0 for all v}.
std::vector<VectorQ> orthogonalComplement(const std::vector<VectorQ>& vs, Index dim);
// Component of v orthogonal (standard inner product) to span(basis).
VectorQ projectOff(const VectorQ& v, const std::vector<VectorQ>& basis);

std::string formatVector(const VectorQ& v);
VectorQ parseVector(std::string_view csv);

}  // namespace conelab
