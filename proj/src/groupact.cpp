#include "conelab/groupact.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "conelab/errors.hpp"

namespace conelab {

MatrixQ adjointOnCurves(const VarietyInstance& inst, const MatrixQ& m) {
  const MatrixQ& p = inst.lattice.pairing;
  auto pinv = inverse(p);
  if (!pinv) throw InputError("pairing is degenerate");
  return *pinv * m.transpose() * p;
}

MatrixQ frameAction(const VarietyInstance& inst, const MatrixQ& m) {
  auto inv = inverse(adjointOnCurves(inst, m));
  if (!inv) throw InputError("group element is singular");
  return *inv;
}

GroupValidation validateGroupElement(const VarietyInstance& inst, const GroupElement& g) {
  const Index r = inst.rank();
  if (g.matrix.rows() != r || g.matrix.cols() != r)
    throw InputError("group element " + g.label + " has size " + std::to_string(g.matrix.rows()) + "x" +
                     std::to_string(g.matrix.cols()) + ", expected " + std::to_string(r));
  GroupValidation out;
  const MatrixQ& m = g.matrix;
  const auto& fib = inst.fibration;
  if (!isIntegral(m)) out.violations.push_back("matrix is not integral");
  out.determinant = determinant(m);
  if (abs(out.determinant) != Rational(1)) out.violations.push_back("determinant is " + out.determinant.str() + ", not ±1");
  if (out.determinant.isZero()) return out;

  const MatrixQ gs = adjointOnCurves(inst, m);
  if (!sameVector(VectorQ(gs * fib.fibre), fib.fibre)) out.violations.push_back("dual action does not fix F");
  if (!sameVector(VectorQ(m * inst.canonicalClass), inst.canonicalClass)) out.violations.push_back("does not fix K");
  for (std::size_t k = 0; k < fib.amplePullbacks.size(); ++k)
    if (!sameVector(VectorQ(m * fib.amplePullbacks[k]), fib.amplePullbacks[k]))
      out.violations.push_back("does not fix ample pullback " + std::to_string(k + 1));

  const auto gens = fibralGenerators(inst, inst.seed.wallFrame);
  const MatrixQ fa = *inverse(gs);
  for (const auto& c : gens)
    if (!inSpan(VectorQ(fa * c), gens)) {
      out.violations.push_back("dual action does not preserve N_1(X/S)");
      break;
    }

  std::vector<VectorQ> ineqs;
  for (const auto& f : fib.fibral) ineqs.push_back(inst.lattice.functional(f));
  PolyCone base = PolyCone::fromInequalities(ineqs, r);
  const VectorQ strict = inst.lattice.functional(fib.fibre);
  const MatrixQ invT = inverse(m)->transpose();
  if (mapCone(base, m) != base || !positivelyProportional(VectorQ(invT * strict), strict))
    out.violations.push_back("does not preserve movable cone");
  return out;
}

// --- slice coordinates --------------------------------------------------------------

VectorQ SliceCoordinates::coordinates(const VectorQ& x) const {
  VectorQ w(dim());
  if (dim() == 0) return w;
  const Rational f = fibreValue(x);
  if (f.isZero()) throw PreconditionError("slice coordinates need x.F != 0");
  for (Index j = 0; j < dim(); ++j) w(j) = dot(x, etaFunctionals[static_cast<std::size_t>(j)]) / f;
  return w;
}

SliceCoordinates sliceCoordinates(const VarietyInstance& inst) {
  const Index r = inst.rank();
  const auto& fib = inst.fibration;
  const auto& lat = inst.lattice;
  SliceCoordinates sc;
  sc.fibre = fib.fibre;
  sc.fibreFunctional = lat.functional(fib.fibre);

  const auto gens = fibralGenerators(inst, inst.seed.wallFrame);
  std::vector<VectorQ> span;
  for (std::size_t i : independentSubset(gens, r)) span.push_back(gens[i]);
  // Ann = {gamma in span : D_i.gamma = 0}.
  std::vector<VectorQ> ann;
  if (fib.vertical.empty()) {
    ann = span;
  } else {
    MatrixQ a(static_cast<Index>(fib.vertical.size()), static_cast<Index>(span.size()));
    for (std::size_t i = 0; i < fib.vertical.size(); ++i)
      for (std::size_t k = 0; k < span.size(); ++k)
        a(static_cast<Index>(i), static_cast<Index>(k)) = lat.pair(fib.vertical[i], span[k]);
    for (const auto& coeffs : kernelBasis(a)) {
      VectorQ v = zeros(r);
      for (std::size_t k = 0; k < span.size(); ++k) v += coeffs(static_cast<Index>(k)) * span[k];
      ann.push_back(v);
    }
  }
  const std::size_t target = ann.empty() ? 0 : ann.size() - 1;

  auto inAnn = [&](const VectorQ& g) {
    for (const auto& d : fib.vertical)
      if (!lat.pair(d, g).isZero()) return false;
    return true;
  };
  std::vector<VectorQ> chosen = {fib.fibre};
  auto consider = [&](const VectorQ& g) {
    if (sc.eta.size() >= target || !inAnn(g)) return;
    std::vector<VectorQ> trial = chosen;
    trial.push_back(g);
    if (rankOf(trial, r) == static_cast<Index>(trial.size())) {
      chosen.push_back(g);
      sc.eta.push_back(g);
    }
  };
  for (const auto& c : inst.seed.wallFrame) consider(c);
  for (const auto& c : fib.fibral) consider(c);
  for (const auto& c : ann) consider(c);
  for (const auto& e : sc.eta) sc.etaFunctionals.push_back(lat.functional(e));
  return sc;
}

TranslationCertificate quotientTranslation(const VarietyInstance& inst, const GroupElement& g) {
  const SliceCoordinates sc = sliceCoordinates(inst);
  const MatrixQ gs = adjointOnCurves(inst, g.matrix);
  const VectorQ& f = sc.fibre;
  if (!sameVector(VectorQ(gs * f), f)) throw InputError("not a translation on W (" + g.label + " moves F)");
  Index pivot = 0;
  while (f(pivot).isZero()) ++pivot;
  TranslationCertificate cert{g, VectorQ(sc.dim())};
  for (Index j = 0; j < sc.dim(); ++j) {
    const VectorQ& eta = sc.eta[static_cast<std::size_t>(j)];
    VectorQ d = gs * eta - eta;
    Rational t = d(pivot) / f(pivot);
    if (!sameVector(d, VectorQ(t * f))) throw InputError("not a translation on W (" + g.label + ")");
    cert.translation(j) = t;
  }
  return cert;
}

std::string formatWord(const VarietyInstance& inst, const Word& w) {
  if (w.empty()) return "id";
  std::string out;
  std::size_t i = 0;
  while (i < w.size()) {
    std::size_t j = i;
    while (j < w.size() && w[j] == w[i]) ++j;
    const int letter = w[i];
    const std::size_t k = static_cast<std::size_t>(std::abs(letter) - 1);
    const std::string name = k < inst.groupGenerators.size() ? inst.groupGenerators[k].label : "g" + std::to_string(k + 1);
    const long power = static_cast<long>(j - i) * (letter > 0 ? 1 : -1);
    if (!out.empty()) out += " ";
    out += name;
    if (power != 1) out += "^" + std::to_string(power);
    i = j;
  }
  return out;
}

// --- group context ----------------------------------------------------------------

namespace {

std::string matrixKey(const MatrixQ& m) {
  std::string s;
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) {
      s += m(i, j).str();
      s += ',';
    }
  return s;
}

MatrixQ power(const MatrixQ& base, std::size_t e) {
  MatrixQ result = identity(base.rows());
  MatrixQ b = base;
  while (e > 0) {
    if (e & 1U) result = result * b;
    e >>= 1U;
    if (e > 0) b = b * b;
  }
  return result;
}

}  // namespace

GroupContext::GroupContext(const VarietyInstance& inst, int wordBudget)
    : inst_(&inst), wordBudget_(wordBudget), slice_(sliceCoordinates(inst)) {
  for (const auto& g : inst.groupGenerators) {
    gens_.push_back(g.matrix);
    auto inv = inverse(g.matrix);
    if (!inv) throw InputError("group generator " + g.label + " is singular");
    inverses_.push_back(*inv);
  }
  translation_ = !gens_.empty();
  for (const auto& g : inst.groupGenerators) {
    try {
      certificates_.push_back(quotientTranslation(inst, g));
    } catch (const InputError&) {
      translation_ = false;
      certificates_.clear();
      break;
    }
  }
  if (translation_) {
    std::vector<VectorQ> vs;
    for (const auto& c : certificates_) vs.push_back(c.translation);
    lattice_ = TranslationLattice(vs, slice_.dim());
  }
  base_ = slice_.dim() > 0 ? chamberPoint(seedChamber(inst)) : VectorQ(0);
}

MatrixQ GroupContext::matrixOf(const Word& w) const {
  MatrixQ m = identity(inst_->rank());
  std::size_t i = 0;
  while (i < w.size()) {
    std::size_t j = i;
    while (j < w.size() && w[j] == w[i]) ++j;
    const std::size_t k = static_cast<std::size_t>(std::abs(w[i]) - 1);
    if (k >= gens_.size()) throw InputError("word letter out of range");
    m = m * power(w[i] > 0 ? gens_[k] : inverses_[k], j - i);
    i = j;
  }
  return m;
}

std::vector<GroupElementEntry> GroupContext::elementsUpTo(int length) const {
  std::vector<GroupElementEntry> out;
  if (gens_.empty() || length <= 0) return out;
  std::set<std::string> seen = {matrixKey(identity(inst_->rank()))};
  std::vector<GroupElementEntry> layer = {{Word{}, identity(inst_->rank())}};
  const int letters = static_cast<int>(gens_.size());
  for (int len = 1; len <= length; ++len) {
    std::vector<GroupElementEntry> next;
    for (const auto& e : layer) {
      for (int k = 1; k <= letters; ++k)
        for (int s : {k, -k}) {
          if (!e.word.empty() && e.word.back() == -s) continue;
          const std::size_t idx = static_cast<std::size_t>(k - 1);
          MatrixQ m = e.matrix * (s > 0 ? gens_[idx] : inverses_[idx]);
          if (!seen.insert(matrixKey(m)).second) continue;
          Word w = e.word;
          w.push_back(s);
          next.push_back({w, m});
        }
    }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

Chamber GroupContext::apply(const Chamber& ch, const MatrixQ& m) const {
  const MatrixQ fa = frameAction(*inst_, m);
  Chamber out;
  for (const auto& c : ch.wallFrame) out.wallFrame.push_back(fa * c);
  out.blocks = ch.blocks;
  out.nef = mapCone(ch.nef, m);
  return out;
}

VectorQ GroupContext::chamberPoint(const Chamber& ch) const {
  const auto& rays = ch.nef.rays();
  bool bounded = !rays.empty();
  for (const auto& r : rays)
    if (slice_.fibreValue(r).sign() <= 0) bounded = false;
  if (bounded) {
    VectorQ sum = zeros(slice_.dim());
    for (const auto& r : rays) sum += slice_.coordinates(r);
    return sum / Rational(static_cast<long>(rays.size()));
  }
  const VectorQ p = ch.nef.relativeInteriorPoint();
  if (slice_.fibreValue(p).sign() <= 0) throw PreconditionError("chamber does not meet the slice x.F = 1");
  return slice_.coordinates(p);
}

Word GroupContext::wordForExponents(const IntVec& exponents) const {
  Word w;
  for (std::size_t k = 0; k < exponents.size(); ++k) {
    const int letter = static_cast<int>(k + 1) * (exponents[k] >= 0 ? 1 : -1);
    Integer count = exponents[k] >= 0 ? exponents[k] : Integer(-exponents[k]);
    for (Integer c = 0; c < count; ++c) w.push_back(letter);
  }
  return w;
}

PointReduction GroupContext::reducePoint(const VectorQ& x) const {
  if (!translation_ || slice_.dim() == 0) return {x, {}, identity(inst_->rank())};
  IntVec z;
  lattice_.reduce(VectorQ(slice_.coordinates(x) - base_), &z);
  IntVec e = lattice_.generatorExponents(z);
  for (auto& v : e) v = -v;
  Word w = wordForExponents(e);
  MatrixQ m = matrixOf(w);
  return {VectorQ(m * x), w, m};
}

ChamberReduction GroupContext::reduceChamber(const Chamber& ch) const {
  const MatrixQ id = identity(inst_->rank());
  if (trivial() || (translation_ && slice_.dim() == 0)) return {ch, {}, id, true};
  if (translation_) {
    IntVec z;
    lattice_.reduce(VectorQ(chamberPoint(ch) - base_), &z);
    IntVec e = lattice_.generatorExponents(z);
    for (auto& v : e) v = -v;
    Word w = wordForExponents(e);
    MatrixQ m = matrixOf(w);
    return {apply(ch, m), w, m, true};
  }
  ChamberReduction best{ch, {}, id, false};
  std::string bestKey = ch.key();
  for (const auto& e : elementsUpTo(wordBudget_)) {
    Chamber img = apply(ch, e.matrix);
    std::string k = img.key();
    if (k < bestKey) {
      bestKey = k;
      best = {img, e.word, e.matrix, false};
    }
  }
  return best;
}

std::vector<std::pair<VectorQ, Rational>> GroupContext::dirichletCell() const {
  std::vector<std::pair<VectorQ, Rational>> out;
  for (const auto& [v, b] : lattice_.dirichletCellInequalities()) out.emplace_back(v, b + dot(v, base_));
  return out;
}

// --- fundamental domain -------------------------------------------------------------

VectorQ sampleMovablePoint(const VarietyInstance& inst, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-20, 20);
  std::uniform_int_distribution<long> den(1, 6);
  const auto& lat = inst.lattice;
  const VectorQ f = lat.functional(inst.fibration.fibre);
  std::vector<VectorQ> fi;
  for (const auto& c : inst.fibration.fibral) fi.push_back(lat.functional(c));
  while (true) {
    VectorQ x(inst.rank());
    for (Index i = 0; i < x.size(); ++i) x(i) = Rational(Integer(num(rng)), Integer(den(rng)));
    if (dot(f, x).sign() <= 0) continue;
    bool ok = true;
    for (const auto& v : fi)
      if (dot(v, x).sign() <= 0) ok = false;
    if (ok) return x;
  }
}

FundamentalDomainReport fundamentalDomainCheck(const VarietyInstance& inst, const PolyCone& pi, std::size_t samples,
                                               int wordBudget, std::uint64_t seed) {
  if (pi.ambientDim() != inst.rank()) throw InputError("Pi has the wrong ambient dimension");
  GroupContext ctx(inst, wordBudget);
  const auto elements = ctx.elementsUpTo(wordBudget);
  FundamentalDomainReport rep;

  std::mt19937_64 rng(seed);
  rep.coverage.samples = samples;
  for (std::size_t i = 0; i < samples; ++i) {
    const VectorQ x = sampleMovablePoint(inst, rng);
    const VectorQ y = ctx.reducePoint(x).point;
    bool hit = pi.contains(y);
    for (std::size_t k = 0; !hit && k < elements.size(); ++k) hit = pi.contains(VectorQ(elements[k].matrix * y));
    if (hit)
      ++rep.coverage.covered;
    else
      rep.coverage.failures.push_back(i);
  }

  rep.disjointness.wordBudget = wordBudget;
  for (const auto& e : elements) {
    ++rep.disjointness.elementsChecked;
    PolyCone overlap = intersect(pi, mapCone(pi, e.matrix));
    if (overlap.dimension() == pi.ambientDim()) {
      rep.disjointness.holds = false;
      rep.disjointness.firstFailureLength = static_cast<int>(e.word.size());
      rep.disjointness.failingWord = formatWord(inst, e.word);
      break;
    }
  }

  const std::string budget = std::to_string(wordBudget);
  if (rep.consistent())
    rep.verdict = "consistent with fundamental domain up to word budget " + budget + " (coverage sampled, not proved)";
  else if (!rep.disjointness.holds)
    rep.verdict = "interiors overlap under " + *rep.disjointness.failingWord;
  else
    rep.verdict = "coverage failed on " + std::to_string(rep.coverage.failures.size()) + " of " +
                  std::to_string(samples) + " samples within word budget " + budget;
  return rep;
}

}  // namespace conelab
