#pragma once

#include <map>
#include <set>
#include <vector>

#include "flagstar/errors.hpp"
#include "flagstar/flag_model.hpp"

namespace flagstar {

/// Canonical bracket {a,b} = sum_i (da/dp_i db/dz_i - da/dz_i db/dp_i), so that {mu^x, mu^y} = mu^[x,y].
inline PolyZP poisson(const PolyZP& a, const PolyZP& b) {
  if (a.nvars() != b.nvars()) throw DimensionError("poisson: variable count mismatch");
  const std::size_t m = a.nvars() / 2;
  PolyZP out(a.nvars());
  for (std::size_t k = 0; k < m; ++k) {
    const PolyZP ap = a.derivative(m + k), az = a.derivative(k);
    if (!ap.is_zero()) out += ap * b.derivative(k);
    if (!az.is_zero()) out -= az * b.derivative(m + k);
  }
  return out;
}

/// phi^alpha: multiplies the fiber-degree-d part by (-1)^d.
inline PolyZP alpha(const PolyZP& a) {
  const std::size_t m = a.nvars() / 2;
  return {a.nvars(), a.terms().map_coefficients([m](const Monomial& mono, const Scalar& c) {
            return mono.partial_degree(m, 2 * m) % 2 == 0 ? c : -c;
          })};
}

inline PolyZP bar(const PolyZP& a) { return a.conj(); }

/// One graded piece R^d: chosen multisets M whose products mu^M form a basis.
struct RLevel {
  int degree = 0;
  std::vector<Multiset> sets;
  std::vector<PolyZP> elements;
  std::vector<Weight> weights;
  std::map<Weight, std::vector<std::size_t>> by_weight;
  std::map<Weight, Echelon<SparseVector>> echelons;

  std::size_t dim() const { return sets.size(); }
  std::size_t dim(const Weight& w) const {
    auto it = by_weight.find(w);
    return it == by_weight.end() ? 0 : it->second.size();
  }
};

/// The classical algebra R up to a degree bound, as symbols on the big cell.
///
/// R^d is spanned by the degree-d products of momentum functions. Its basis is
/// chosen greedily: candidates M' + {a} (M' chosen in degree d-1) are taken in
/// lexicographic order and kept when independent of the earlier ones within
/// their weight space.
class ClassicalSide {
 public:
  ClassicalSide(const FlagModel& model, int max_degree) : model_(&model) {
    levels_.push_back(make_level0());
    for (int d = 1; d <= max_degree; ++d) levels_.push_back(next_level(levels_.back()));
  }

  /// Restores a basis from known multisets (a cache hit); independence is re-verified.
  ClassicalSide(const FlagModel& model, const std::vector<std::vector<Multiset>>& sets) : model_(&model) {
    levels_.push_back(make_level0());
    for (std::size_t d = 1; d < sets.size(); ++d) {
      RLevel lvl;
      lvl.degree = static_cast<int>(d);
      for (const auto& s : sets[d])
        if (!try_add(lvl, s, product(s))) throw ConsistencyError("prop:res", "cached basis is dependent");
      levels_.push_back(std::move(lvl));
    }
  }

  const FlagModel& model() const { return *model_; }
  int max_degree() const { return static_cast<int>(levels_.size()) - 1; }
  const RLevel& level(int d) const {
    if (d < 0 || d > max_degree()) throw DimensionError("ClassicalSide: degree " + std::to_string(d) + " not built");
    return levels_[static_cast<std::size_t>(d)];
  }
  std::size_t dim(int d) const { return level(d).dim(); }
  const PolyZP& basis(int d, std::size_t k) const { return level(d).elements[k]; }

  /// mu^{M_0} ... mu^{M_{k-1}}
  PolyZP product(const Multiset& s) const {
    PolyZP out = PolyZP::constant(2 * model_->m(), 1);
    for (int a : s) out = out * model_->mu(static_cast<std::size_t>(a));
    return out;
  }

  /// Coordinates of a fiber-homogeneous phi of degree d in the basis of R^d.
  std::vector<Scalar> coordinates(const PolyZP& phi, int d) const {
    const RLevel& lvl = level(d);
    std::vector<Scalar> out(lvl.dim());
    std::map<Weight, std::vector<Term>> parts;
    for (const auto& t : phi.terms()) {
      if (t.first.partial_degree(model_->m(), 2 * model_->m()) != d)
        throw ConsistencyError("eq:PolT*XR", "element is not homogeneous of fiber degree " + std::to_string(d));
      parts[model_->weight(t.first)].push_back(t);
    }
    for (auto& [w, raw] : parts) {
      auto it = lvl.echelons.find(w);
      const TermList v = TermList::from_terms(std::move(raw));
      if (it == lvl.echelons.end()) throw ConsistencyError("prop:res", "element is not in R^" + std::to_string(d));
      auto red = it->second.reduce(v);
      if (!red.residual.empty()) throw ConsistencyError("prop:res", "element is not in R^" + std::to_string(d));
      for (const auto& [k, c] : red.combination) out[k] = c;
    }
    return out;
  }

  bool contains(const PolyZP& phi, int d) const {
    try {
      coordinates(phi, d);
      return true;
    } catch (const ConsistencyError&) {
      return false;
    }
  }

  PolyZP element(int d, const std::vector<Scalar>& coords) const {
    const RLevel& lvl = level(d);
    PolyZP out(2 * model_->m());
    for (std::size_t k = 0; k < lvl.dim(); ++k)
      if (!coords[k].is_zero()) out = out.axpy(coords[k], lvl.elements[k]);
    return out;
  }

  /// sigma_R: the anti-linear algebra map with mu^x -> mu^{sigma(x)}, applied through the basis.
  PolyZP sigma(const PolyZP& phi, int d) const {
    const auto c = coordinates(phi, d);
    PolyZP out(2 * model_->m());
    for (std::size_t k = 0; k < c.size(); ++k)
      if (!c[k].is_zero()) out = out.axpy(c[k].conj(), sigma_product(level(d).sets[k]));
    return out;
  }

  /// mu^{sigma(X_{a1})} ... mu^{sigma(X_{ad})} = (-1)^d mu^{sigma-index word}
  PolyZP sigma_product(const Multiset& s) const {
    Multiset t;
    for (int a : s) t.push_back(static_cast<int>(model_->lie().sigma_index(static_cast<std::size_t>(a))));
    PolyZP p = product(t);
    return s.size() % 2 == 0 ? p : -p;
  }

  std::vector<std::vector<Multiset>> all_sets() const {
    std::vector<std::vector<Multiset>> out;
    for (const auto& l : levels_) out.push_back(l.sets);
    return out;
  }

 private:
  RLevel make_level0() const {
    RLevel lvl;
    lvl.degree = 0;
    try_add(lvl, {}, PolyZP::constant(2 * model_->m(), 1));
    return lvl;
  }

  bool try_add(RLevel& lvl, const Multiset& s, const PolyZP& elem) const {
    const Weight w = model_->weight(s);
    auto it = lvl.echelons.try_emplace(w).first;
    if (!it->second.insert(elem.terms(), SparseVector::unit(lvl.sets.size()))) return false;
    lvl.by_weight[w].push_back(lvl.sets.size());
    lvl.sets.push_back(s);
    lvl.elements.push_back(elem);
    lvl.weights.push_back(w);
    return true;
  }

  RLevel next_level(const RLevel& prev) const {
    RLevel lvl;
    lvl.degree = prev.degree + 1;
    std::map<Multiset, std::pair<std::size_t, int>> candidates;  // multiset -> (parent index, added generator)
    for (std::size_t k = 0; k < prev.dim(); ++k)
      for (std::size_t a = 0; a < model_->dim_g(); ++a) {
        Multiset s = prev.sets[k];
        s.insert(std::upper_bound(s.begin(), s.end(), static_cast<int>(a)), static_cast<int>(a));
        candidates.try_emplace(std::move(s), k, static_cast<int>(a));
      }
    for (const auto& [s, origin] : candidates)
      try_add(lvl, s, prev.elements[origin.first] * model_->mu(static_cast<std::size_t>(origin.second)));
    return lvl;
  }

  const FlagModel* model_;
  std::vector<RLevel> levels_;
};

/// All multisets of size d over {0..n-1}, lexicographic.
inline std::vector<Multiset> all_multisets(std::size_t n, int d) {
  std::vector<Multiset> out;
  Multiset cur;
  auto rec = [&](auto&& self, int start, int left) -> void {
    if (left == 0) {
      out.push_back(cur);
      return;
    }
    for (int a = start; a < static_cast<int>(n); ++a) {
      cur.push_back(a);
      self(self, a, left - 1);
      cur.pop_back();
    }
  };
  rec(rec, 0, d);
  return out;
}

/// Permanent of the square matrix rows x cols of f, rows and cols given as index lists.
inline Scalar permanent(const Matrix& f, const std::vector<int>& rows, std::vector<int> cols) {
  Scalar total;
  std::vector<std::size_t> perm(cols.size());
  for (std::size_t k = 0; k < perm.size(); ++k) perm[k] = k;
  do {
    Scalar p(1);
    for (std::size_t k = 0; k < rows.size() && !p.is_zero(); ++k)
      p *= f(static_cast<std::size_t>(rows[k]), static_cast<std::size_t>(cols[perm[k]]));
    total += p;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

/// I^d (kernel of mu-substitution) and its Fischer-orthogonal complement H^d in S^d(g).
struct IdealData {
  int degree = 0;
  std::vector<Multiset> monomials;     // basis of S^d(g)
  std::vector<SymElement> ideal;       // basis of I^d
  std::vector<SymElement> harmonics;   // H_k maps to the k-th basis element of R^d
  Matrix fischer;                      // bh on the monomial basis

  std::size_t dim_s() const { return monomials.size(); }
  std::size_t dim_i() const { return ideal.size(); }
  std::size_t dim_h() const { return harmonics.size(); }
};

inline SymElement sym_from_coords(std::size_t dim_g, const std::vector<Multiset>& monos, const std::vector<Scalar>& c) {
  std::vector<Term> raw;
  for (std::size_t k = 0; k < monos.size(); ++k)
    if (!c[k].is_zero()) raw.emplace_back(multiset_monomial(monos[k], dim_g), c[k]);
  return {dim_g, TermList::from_terms(std::move(raw))};
}

/// Builds I^d and H^d.
inline IdealData ideal_and_harmonics(const ClassicalSide& cs, int d) {
  const FlagModel& model = cs.model();
  const LieAlgebra& g = model.lie();
  IdealData out;
  out.degree = d;
  out.monomials = all_multisets(g.dim(), d);
  const std::size_t ns = out.monomials.size(), nr = cs.dim(d);
  Matrix subst(nr, ns);
  for (std::size_t k = 0; k < ns; ++k) subst.set_column(k, cs.coordinates(cs.product(out.monomials[k]), d));
  const auto kernel = nullspace(subst);
  for (const auto& v : kernel) out.ideal.push_back(sym_from_coords(g.dim(), out.monomials, v));

  Matrix frob(g.dim(), g.dim());
  for (std::size_t a = 0; a < g.dim(); ++a)
    for (std::size_t b = 0; b < g.dim(); ++b) frob(a, b) = g.trace_form(g.cartan_involution(g.unit(a)), g.unit(b)) * Scalar(-1);
  // bh(X^M, X^N) = d_{X^N}(X^M) = permanent of F over (N, M)
  out.fischer = Matrix(ns, ns);
  for (std::size_t i = 0; i < ns; ++i)
    for (std::size_t j = 0; j < ns; ++j) out.fischer(i, j) = permanent(frob, out.monomials[j], out.monomials[i]);

  // Gram of the ideal basis and pairing of each chosen basis monomial against it
  const std::size_t ni = kernel.size();
  auto pair = [&](const std::vector<Scalar>& x, const std::vector<Scalar>& y) {
    Scalar s;
    for (std::size_t i = 0; i < ns; ++i) {
      if (x[i].is_zero()) continue;
      for (std::size_t j = 0; j < ns; ++j)
        if (!y[j].is_zero() && !out.fischer(i, j).is_zero()) s += x[i] * y[j].conj() * out.fischer(i, j);
    }
    return s;
  };
  Matrix gi(ni, ni);
  for (std::size_t a = 0; a < ni; ++a)
    for (std::size_t b = 0; b < ni; ++b) gi(a, b) = pair(kernel[a], kernel[b]);

  std::map<Multiset, std::size_t> mono_index;
  for (std::size_t k = 0; k < ns; ++k) mono_index[out.monomials[k]] = k;
  for (const auto& s : cs.level(d).sets) {
    std::vector<Scalar> x(ns);
    x[mono_index.at(s)] = 1;
    if (ni > 0) {
      // h = x - sum a_i I_i with bh(h, I_j) = 0: sum_i a_i bh(I_i, I_j) = bh(x, I_j)
      std::vector<Scalar> rhs(ni);
      for (std::size_t j = 0; j < ni; ++j) rhs[j] = pair(x, kernel[j]);
      const auto a = solve(gi.transpose(), rhs);
      if (!a) throw ConsistencyError("rem:symm", "Fischer form is degenerate on I^" + std::to_string(d));
      for (std::size_t i = 0; i < ni; ++i)
        for (std::size_t k = 0; k < ns; ++k)
          if (!kernel[i][k].is_zero()) x[k] -= (*a)[i] * kernel[i][k];
    }
    out.harmonics.push_back(sym_from_coords(g.dim(), out.monomials, x));
  }
  return out;
}

/// Unique lift of phi in R^d to H^d.
inline SymElement harmonic_lift(const ClassicalSide& cs, const IdealData& id, const PolyZP& phi) {
  const auto c = cs.coordinates(phi, id.degree);
  SymElement out(cs.model().dim_g());
  for (std::size_t k = 0; k < c.size(); ++k)
    if (!c[k].is_zero()) out = out.axpy(c[k], id.harmonics[k]);
  return out;
}

/// Whether I^d equals the degree-d part of the ideal generated by the casimirs.
inline bool casimirs_generate(const ClassicalSide& cs, const IdealData& id) {
  const LieAlgebra& g = cs.model().lie();
  Echelon<NoPayload> generated;
  for (const auto& c : g.casimirs()) {
    const int rest = id.degree - c.total_degree();
    if (rest < 0) continue;
    for (const auto& s : all_multisets(g.dim(), rest)) {
      const SymElement prod = c * SymElement::monomial(multiset_monomial(s, g.dim()));
      generated.insert(prod.terms(), {});
    }
  }
  return generated.rank() == id.dim_i();
}

}  // namespace flagstar
