#include "conelab/polycone.hpp"

#include <algorithm>
#include <boost/dynamic_bitset.hpp>

#include "conelab/errors.hpp"

namespace conelab {

namespace {

using Bits = boost::dynamic_bitset<>;

struct DDRay {
  IntVec v;
  Bits zero;  // processed inequalities vanishing on v
};

Integer dotInt(const IntVec& a, const IntVec& b) {
  Integer s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void makePrimitive(IntVec& v) {
  Integer g = 0;
  for (const auto& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  if (g > 1)
    for (auto& x : v) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
}

// s*a - t*b, made primitive.
IntVec combine(const Integer& s, const IntVec& a, const Integer& t, const IntVec& b) {
  IntVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = s * a[i] - t * b[i];
  makePrimitive(out);
  return out;
}

struct DDResult {
  std::vector<IntVec> rays;
  std::vector<IntVec> lineality;
};

// Cone {x : a.x >= 0 for all a} by incremental insertion, starting from the whole space.
// Invariant: span(lineality) is exactly the common kernel of the processed inequalities.
DDResult doubleDescription(const std::vector<IntVec>& ineqs, Index dim) {
  const std::size_t m = ineqs.size();
  std::vector<IntVec> lin;
  for (Index i = 0; i < dim; ++i) {
    IntVec e(dim, 0);
    e[i] = 1;
    lin.push_back(e);
  }
  std::vector<DDRay> rays;

  for (std::size_t k = 0; k < m; ++k) {
    const IntVec& a = ineqs[k];
    std::size_t li = lin.size();
    for (std::size_t i = 0; i < lin.size(); ++i)
      if (dotInt(a, lin[i]) != 0) {
        li = i;
        break;
      }

    if (li < lin.size()) {
      IntVec l = lin[li];
      Integer al = dotInt(a, l);
      if (al < 0) {
        for (auto& x : l) x = -x;
        al = -al;
      }
      lin.erase(lin.begin() + static_cast<std::ptrdiff_t>(li));
      for (auto& other : lin) {
        Integer ao = dotInt(a, other);
        if (ao != 0) other = combine(al, other, ao, l);
      }
      for (auto& r : rays) {
        Integer ar = dotInt(a, r.v);
        if (ar != 0) r.v = combine(al, r.v, ar, l);
        r.zero.set(k);
      }
      Bits z(m);
      for (std::size_t j = 0; j < k; ++j) z.set(j);
      rays.push_back({std::move(l), std::move(z)});
      continue;
    }

    std::vector<std::size_t> pos, neg;
    std::vector<Integer> val(rays.size());
    for (std::size_t i = 0; i < rays.size(); ++i) {
      val[i] = dotInt(a, rays[i].v);
      int s = sgn(val[i]);
      if (s > 0)
        pos.push_back(i);
      else if (s < 0)
        neg.push_back(i);
      else
        rays[i].zero.set(k);
    }
    if (neg.empty()) continue;

    const Index dPointed = dim - static_cast<Index>(lin.size());
    const std::size_t need = dPointed >= 2 ? static_cast<std::size_t>(dPointed - 2) : 0;
    std::vector<DDRay> fresh;
    for (std::size_t p : pos) {
      for (std::size_t n : neg) {
        Bits common = rays[p].zero & rays[n].zero;
        if (common.count() < need) continue;
        // Combinatorial adjacency: no third extreme ray is tight wherever both are.
        bool adjacent = true;
        for (std::size_t r = 0; r < rays.size() && adjacent; ++r)
          if (r != p && r != n && common.is_subset_of(rays[r].zero)) adjacent = false;
        if (!adjacent) continue;
        IntVec v = combine(val[p], rays[n].v, val[n], rays[p].v);
        common.set(k);
        fresh.push_back({std::move(v), std::move(common)});
      }
    }
    std::vector<DDRay> next;
    next.reserve(rays.size() - neg.size() + fresh.size());
    for (std::size_t i = 0; i < rays.size(); ++i)
      if (sgn(val[i]) >= 0) next.push_back(std::move(rays[i]));
    for (auto& f : fresh) next.push_back(std::move(f));
    rays = std::move(next);
  }

  DDResult out;
  out.lineality = std::move(lin);
  for (auto& r : rays) out.rays.push_back(std::move(r.v));
  return out;
}

IntVec toIntegral(const VectorQ& v) { return primitiveIntegral(v); }

void sortUnique(std::vector<VectorQ>& vs) {
  std::sort(vs.begin(), vs.end(), lexLess);
  vs.erase(std::unique(vs.begin(), vs.end(), sameVector), vs.end());
}

// Canonical representatives modulo a subspace with the given basis.
std::vector<VectorQ> reduceModulo(const std::vector<VectorQ>& vs, const std::vector<VectorQ>& sub) {
  std::vector<VectorQ> out;
  for (const auto& v : vs) {
    VectorQ p = projectOff(v, sub);
    if (isZero(p)) continue;
    out.push_back(primitive(p));
  }
  sortUnique(out);
  return out;
}

void checkDims(const std::vector<VectorQ>& vs, Index dim) {
  for (const auto& v : vs)
    if (v.size() != dim)
      throw InputError("cone input vector has " + std::to_string(v.size()) + " entries, ambient dimension is " +
                       std::to_string(dim));
}

}  // namespace

PolyCone buildFromH(const std::vector<VectorQ>& ineqs, Index dim) {
  std::vector<IntVec> rows;
  for (const auto& a : ineqs)
    if (!isZero(a)) rows.push_back(toIntegral(a));
  DDResult dd = doubleDescription(rows, dim);

  PolyCone c;
  c.dim_ = dim;
  std::vector<VectorQ> lin;
  for (const auto& l : dd.lineality) lin.push_back(toQ(l));
  c.lineality_ = canonicalSpanBasis(lin, dim);
  std::vector<VectorQ> rays;
  for (const auto& r : dd.rays) rays.push_back(toQ(r));
  c.rays_ = reduceModulo(rays, c.lineality_);

  std::vector<VectorQ> gens = c.rays_;
  gens.insert(gens.end(), c.lineality_.begin(), c.lineality_.end());
  c.equalities_ = canonicalSpanBasis(orthogonalComplement(gens, dim), dim);

  // Every face contains the lineality and is determined by the rays it contains, so the
  // facets are the rows whose set of tight rays is maximal among proper ones.
  std::vector<Bits> tight;
  std::vector<VectorQ> cand;
  for (const auto& row : rows) {
    VectorQ a = toQ(row);
    Bits t(c.rays_.size());
    for (std::size_t i = 0; i < c.rays_.size(); ++i)
      if (dot(a, c.rays_[i]).isZero()) t.set(i);
    if (t.count() == c.rays_.size()) continue;  // implicit equality
    tight.push_back(std::move(t));
    cand.push_back(std::move(a));
  }
  std::vector<VectorQ> facets;
  for (std::size_t i = 0; i < cand.size(); ++i) {
    bool maximal = true;
    for (std::size_t j = 0; j < cand.size() && maximal; ++j)
      if (tight[j] != tight[i] && tight[i].is_subset_of(tight[j])) maximal = false;
    if (!maximal) continue;
    bool duplicate = false;
    for (std::size_t j = 0; j < i && !duplicate; ++j)
      if (tight[j] == tight[i]) duplicate = true;
    if (!duplicate) facets.push_back(primitive(projectOff(cand[i], c.equalities_)));
  }
  sortUnique(facets);
  c.facets_ = std::move(facets);
  return c;
}

PolyCone buildFromV(const std::vector<VectorQ>& gens, const std::vector<VectorQ>& linGens, Index dim) {
  std::vector<IntVec> rows;
  for (const auto& l : linGens) {
    if (isZero(l)) continue;
    IntVec v = toIntegral(l);
    rows.push_back(v);
    for (auto& x : v) x = -x;
    rows.push_back(v);
  }
  for (const auto& g : gens)
    if (!isZero(g)) rows.push_back(toIntegral(g));
  DDResult dual = doubleDescription(rows, dim);

  PolyCone c;
  c.dim_ = dim;
  std::vector<VectorQ> eq;
  for (const auto& l : dual.lineality) eq.push_back(toQ(l));
  c.equalities_ = canonicalSpanBasis(eq, dim);
  std::vector<VectorQ> facets;
  for (const auto& r : dual.rays) facets.push_back(toQ(r));
  c.facets_ = reduceModulo(facets, c.equalities_);

  std::vector<VectorQ> cons = c.facets_;
  cons.insert(cons.end(), c.equalities_.begin(), c.equalities_.end());
  c.lineality_ = canonicalSpanBasis(orthogonalComplement(cons, dim), dim);

  const Index target = dim - c.linealityDim() - 1;
  std::vector<VectorQ> rays;
  for (const auto& g : reduceModulo(gens, c.lineality_)) {
    std::vector<VectorQ> tight = c.equalities_;
    for (const auto& f : c.facets_)
      if (dot(f, g).isZero()) tight.push_back(f);
    if (rankOf(tight, dim) == target) rays.push_back(g);
  }
  sortUnique(rays);
  c.rays_ = std::move(rays);
  return c;
}

PolyCone PolyCone::fromGenerators(const std::vector<VectorQ>& generators, Index dim,
                                  const std::vector<VectorQ>& lineality) {
  if (dim <= 0) throw InputError("cone ambient dimension must be positive");
  checkDims(generators, dim);
  checkDims(lineality, dim);
  return buildFromV(generators, lineality, dim);
}

PolyCone PolyCone::fromInequalities(const std::vector<VectorQ>& inequalities, Index dim,
                                    const std::vector<VectorQ>& equalities) {
  if (dim <= 0) throw InputError("cone ambient dimension must be positive");
  checkDims(inequalities, dim);
  checkDims(equalities, dim);
  std::vector<VectorQ> all;
  for (const auto& e : equalities) {
    all.push_back(e);
    all.push_back(-e);
  }
  all.insert(all.end(), inequalities.begin(), inequalities.end());
  return buildFromH(all, dim);
}

PolyCone buildDualPair(const std::vector<VectorQ>& input, ConeInput kind, Index dim) {
  return kind == ConeInput::Generators ? PolyCone::fromGenerators(input, dim)
                                       : PolyCone::fromInequalities(input, dim);
}

std::vector<VectorQ> PolyCone::allInequalities() const {
  std::vector<VectorQ> out = facets_;
  for (const auto& e : equalities_) {
    out.push_back(e);
    out.push_back(-e);
  }
  return out;
}

std::vector<VectorQ> PolyCone::allGenerators() const {
  std::vector<VectorQ> out = rays_;
  for (const auto& l : lineality_) {
    out.push_back(l);
    out.push_back(-l);
  }
  return out;
}

bool PolyCone::contains(const VectorQ& x) const {
  if (x.size() != dim_) throw InputError("membership test vector has wrong dimension");
  for (const auto& e : equalities_)
    if (!dot(e, x).isZero()) return false;
  for (const auto& f : facets_)
    if (dot(f, x).sign() < 0) return false;
  return true;
}

bool PolyCone::containsInRelativeInterior(const VectorQ& x) const {
  if (x.size() != dim_) throw InputError("membership test vector has wrong dimension");
  for (const auto& e : equalities_)
    if (!dot(e, x).isZero()) return false;
  for (const auto& f : facets_)
    if (dot(f, x).sign() <= 0) return false;
  return true;
}

bool PolyCone::containsInInterior(const VectorQ& x) const {
  return isFullDimensional() && containsInRelativeInterior(x);
}

VectorQ PolyCone::relativeInteriorPoint() const {
  VectorQ s = zeros(dim_);
  for (const auto& r : rays_) s += r;
  return s;
}

PolyCone PolyCone::dual() const {
  PolyCone d;
  d.dim_ = dim_;
  d.rays_ = facets_;
  d.lineality_ = equalities_;
  d.facets_ = rays_;
  d.equalities_ = lineality_;
  return d;
}

PolyCone PolyCone::face(const VectorQ& v) const {
  std::vector<VectorQ> tight;
  for (const auto& r : rays_)
    if (dot(v, r).isZero()) tight.push_back(r);
  return fromGenerators(tight, dim_, lineality_);
}

bool operator==(const PolyCone& a, const PolyCone& b) {
  auto same = [](const std::vector<VectorQ>& x, const std::vector<VectorQ>& y) {
    return x.size() == y.size() && std::equal(x.begin(), x.end(), y.begin(), sameVector);
  };
  return a.dim_ == b.dim_ && same(a.lineality_, b.lineality_) && same(a.rays_, b.rays_) &&
         same(a.equalities_, b.equalities_) && same(a.facets_, b.facets_);
}

bool membership(const PolyCone& c, const VectorQ& x, MembershipMode mode) {
  return mode == MembershipMode::Closed ? c.contains(x) : c.containsInInterior(x);
}

bool membership(const ConeWithOpenFaces& c, const VectorQ& x, MembershipMode mode) {
  if (!membership(c.base, x, mode)) return false;
  for (const auto& s : c.strict)
    if (dot(s, x).sign() <= 0) return false;
  return true;
}

PolyCone intersect(const PolyCone& a, const PolyCone& b) {
  if (a.ambientDim() != b.ambientDim())
    throw InputError("intersect: ambient dimensions " + std::to_string(a.ambientDim()) + " and " +
                     std::to_string(b.ambientDim()) + " differ");
  std::vector<VectorQ> eq = a.equalities();
  eq.insert(eq.end(), b.equalities().begin(), b.equalities().end());
  std::vector<VectorQ> ineq = a.inequalities();
  ineq.insert(ineq.end(), b.inequalities().begin(), b.inequalities().end());
  return PolyCone::fromInequalities(ineq, a.ambientDim(), eq);
}

PolyCone mapCone(const PolyCone& c, const MatrixQ& m) {
  const Index d = c.ambientDim();
  if (m.rows() != d || m.cols() != d) throw InputError("mapCone: matrix size does not match ambient dimension");
  auto inv = inverse(m);
  if (!inv) throw InputError("mapCone: singular matrix");
  MatrixQ invT = inv->transpose();
  auto apply = [](const MatrixQ& a, const std::vector<VectorQ>& vs) {
    std::vector<VectorQ> out;
    for (const auto& v : vs) out.push_back(a * v);
    return out;
  };
  PolyCone out;
  out.dim_ = d;
  out.lineality_ = canonicalSpanBasis(apply(m, c.lineality()), d);
  out.rays_ = reduceModulo(apply(m, c.rays()), out.lineality_);
  out.equalities_ = canonicalSpanBasis(apply(invT, c.equalities()), d);
  out.facets_ = reduceModulo(apply(invT, c.inequalities()), out.equalities_);
  return out;
}

}  // namespace conelab
