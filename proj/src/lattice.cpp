#include "conelab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "conelab/errors.hpp"

namespace conelab {

namespace {

struct GramSchmidt {
  std::vector<VectorQ> star;
  std::vector<std::vector<Rational>> mu;
  std::vector<Rational> norm;  // |b*_i|^2
};

GramSchmidt gramSchmidt(const std::vector<VectorQ>& b) {
  GramSchmidt gs;
  const std::size_t n = b.size();
  gs.mu.assign(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) {
    VectorQ v = b[i];
    for (std::size_t j = 0; j < i; ++j) {
      gs.mu[i][j] = dot(b[i], gs.star[j]) / gs.norm[j];
      v -= gs.mu[i][j] * gs.star[j];
    }
    gs.star.push_back(v);
    gs.norm.push_back(dot(v, v));
  }
  return gs;
}

Integer roundNearest(const Rational& q) { return (q + Rational(Integer(1), Integer(2))).floor(); }

void subtractRow(IntVec& a, const IntVec& b, const Integer& q) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= q * b[i];
}

}  // namespace

void lllReduce(std::vector<VectorQ>& b, std::vector<IntVec>* transform) {
  const std::size_t n = b.size();
  if (n < 2) return;
  const Rational delta(Integer(3), Integer(4));
  std::size_t k = 1;
  GramSchmidt gs = gramSchmidt(b);
  while (k < n) {
    for (std::size_t jj = k; jj-- > 0;) {
      Integer q = roundNearest(gs.mu[k][jj]);
      if (q == 0) continue;
      b[k] -= Rational(q) * b[jj];
      if (transform) subtractRow((*transform)[k], (*transform)[jj], q);
      gs = gramSchmidt(b);
    }
    Rational m = gs.mu[k][k - 1];
    if (gs.norm[k] >= (delta - m * m) * gs.norm[k - 1]) {
      ++k;
    } else {
      std::swap(b[k], b[k - 1]);
      if (transform) std::swap((*transform)[k], (*transform)[k - 1]);
      gs = gramSchmidt(b);
      k = std::max<std::size_t>(k - 1, 1);
    }
  }
}

std::vector<IntVec> closestPointsInBasis(const std::vector<VectorQ>& basis, const VectorQ& y) {
  const std::size_t k = basis.size();
  if (k == 0) return {IntVec{}};
  const Index d = y.size();
  GramSchmidt gs = gramSchmidt(basis);

  MatrixQ bm = rowsOf(basis, d);
  LinearSolution sol = solveLinear(MatrixQ(bm * bm.transpose()), VectorQ(bm * y));
  if (!sol.unique()) throw InputError("lattice basis is dependent");
  const VectorQ& c = *sol.particular;

  // Babai nearest plane gives the initial radius.
  IntVec z(k);
  Rational bound = 0;
  for (std::size_t j = k; j-- > 0;) {
    Rational t = c(static_cast<Index>(j));
    for (std::size_t i = j + 1; i < k; ++i) t += gs.mu[i][j] * (c(static_cast<Index>(i)) - Rational(z[i]));
    z[j] = roundNearest(t);
    Rational diff = t - Rational(z[j]);
    bound += gs.norm[j] * diff * diff;
  }

  std::vector<IntVec> best;
  Rational bestDist = bound;
  IntVec cur(k);
  std::function<void(std::size_t, const Rational&)> search = [&](std::size_t level, const Rational& partial) {
    const std::size_t j = level - 1;
    Rational t = c(static_cast<Index>(j));
    for (std::size_t i = j + 1; i < k; ++i) t += gs.mu[i][j] * (c(static_cast<Index>(i)) - Rational(cur[i]));
    const Rational rem = bestDist - partial;
    if (rem.sign() < 0) return;
    double radius = std::sqrt((rem / gs.norm[j]).toDouble()) + 1.0;
    double center = t.toDouble();
    Integer lo(std::floor(center - radius)), hi(std::ceil(center + radius));
    for (Integer zj = lo; zj <= hi; ++zj) {
      Rational diff = t - Rational(zj);
      Rational term = partial + gs.norm[j] * diff * diff;
      if (term > bestDist) continue;
      cur[j] = zj;
      if (j == 0) {
        if (term < bestDist) {
          bestDist = term;
          best.clear();
        }
        best.push_back(cur);
      } else {
        search(j, term);
      }
    }
  };
  search(k, Rational(0));
  // Entries found before the radius shrank may be stale.
  std::vector<IntVec> out;
  for (const auto& cand : best) {
    Rational dist = 0;
    for (std::size_t j = k; j-- > 0;) {
      Rational t = c(static_cast<Index>(j));
      for (std::size_t i = j + 1; i < k; ++i) t += gs.mu[i][j] * (c(static_cast<Index>(i)) - Rational(cand[i]));
      Rational e = t - Rational(cand[j]);
      dist += gs.norm[j] * e * e;
    }
    if (dist == bestDist) out.push_back(cand);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

TranslationLattice::TranslationLattice(const std::vector<VectorQ>& generators, Index dim) : dim_(dim) {
  const std::size_t m = generators.size();
  if (m == 0 || dim == 0) return;
  Integer den = 1;
  for (const auto& g : generators) {
    if (g.size() != dim) throw InputError("lattice generator has wrong dimension");
    for (Index i = 0; i < dim; ++i) {
      Integer d = g(i).den();
      mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), d.get_mpz_t());
    }
  }
  std::vector<IntVec> rows(m, IntVec(dim));
  for (std::size_t r = 0; r < m; ++r)
    for (Index i = 0; i < dim; ++i) rows[r][i] = generators[r](i).num() * (den / generators[r](i).den());
  std::vector<IntVec> u(m, IntVec(m, 0));
  for (std::size_t r = 0; r < m; ++r) u[r][r] = 1;

  // Integer row echelon form by repeated Euclidean steps; u tracks the unimodular transform.
  std::size_t r = 0;
  for (Index c = 0; c < dim && r < m; ++c) {
    while (true) {
      std::size_t piv = m;
      for (std::size_t i = r; i < m; ++i)
        if (rows[i][c] != 0 && (piv == m || abs(rows[i][c]) < abs(rows[piv][c]))) piv = i;
      if (piv == m) break;
      std::swap(rows[piv], rows[r]);
      std::swap(u[piv], u[r]);
      bool done = true;
      for (std::size_t i = r + 1; i < m; ++i) {
        if (rows[i][c] == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), rows[i][c].get_mpz_t(), rows[r][c].get_mpz_t());
        subtractRow(rows[i], rows[r], q);
        subtractRow(u[i], u[r], q);
        if (rows[i][c] != 0) done = false;
      }
      if (done) break;
    }
    if (rows[r][c] != 0) ++r;
  }
  for (std::size_t i = 0; i < r; ++i) {
    VectorQ b(dim);
    for (Index j = 0; j < dim; ++j) b(j) = Rational(rows[i][j], den);
    basis_.push_back(b);
    toGenerators_.push_back(u[i]);
  }
  lllReduce(basis_, &toGenerators_);
}

std::vector<VectorQ> TranslationLattice::closestVectors(const VectorQ& y) const {
  std::vector<VectorQ> out;
  for (const auto& z : closestPointsInBasis(basis_, y)) {
    VectorQ v = zeros(dim_);
    for (std::size_t i = 0; i < z.size(); ++i) v += Rational(z[i]) * basis_[i];
    out.push_back(v);
  }
  return out;
}

VectorQ TranslationLattice::reduce(const VectorQ& y, IntVec* coefficients) const {
  auto pts = closestPointsInBasis(basis_, y);
  VectorQ bestV;
  VectorQ bestPoint;
  IntVec bestZ;
  for (const auto& z : pts) {
    VectorQ v = zeros(dim_);
    for (std::size_t i = 0; i < z.size(); ++i) v += Rational(z[i]) * basis_[i];
    VectorQ p = y - v;
    if (bestPoint.size() == 0 || lexLess(p, bestPoint)) {
      bestV = v;
      bestPoint = p;
      bestZ = z;
    }
  }
  if (coefficients) *coefficients = bestZ;
  return bestV;
}

IntVec TranslationLattice::generatorExponents(const IntVec& basisCoefficients) const {
  const std::size_t m = toGenerators_.empty() ? 0 : toGenerators_[0].size();
  IntVec out(m, 0);
  for (std::size_t k = 0; k < basisCoefficients.size(); ++k)
    for (std::size_t g = 0; g < m; ++g) out[g] += basisCoefficients[k] * toGenerators_[k][g];
  return out;
}

std::vector<VectorQ> TranslationLattice::voronoiRelevantVectors() const {
  const std::size_t k = basis_.size();
  std::vector<VectorQ> doubled;
  for (const auto& b : basis_) doubled.push_back(Rational(2) * b);
  std::vector<VectorQ> out;
  for (unsigned long mask = 1; mask < (1UL << k); ++mask) {
    VectorQ s = zeros(dim_);
    for (std::size_t i = 0; i < k; ++i)
      if (mask & (1UL << i)) s += basis_[i];
    auto mins = closestPointsInBasis(doubled, VectorQ(-s));
    if (mins.size() != 2) continue;
    for (const auto& u : mins) {
      VectorQ v = s;
      for (std::size_t i = 0; i < k; ++i) v += Rational(u[i]) * doubled[i];
      out.push_back(v);
    }
  }
  std::sort(out.begin(), out.end(), lexLess);
  return out;
}

std::vector<std::pair<VectorQ, Rational>> TranslationLattice::dirichletCellInequalities() const {
  std::vector<std::pair<VectorQ, Rational>> out;
  for (const auto& v : voronoiRelevantVectors()) out.emplace_back(v, dot(v, v) / Rational(2));
  return out;
}

}  // namespace conelab
