#pragma once

#include <unordered_map>
#include <vector>

#include "flagstar/dmodule.hpp"

namespace flagstar {

/// The invariant trace T on D_{<=K}, stored as a linear functional on normal-ordered monomials.
///
/// T is the unique functional with T(1) = 1 that vanishes on [eta^x, D]. At
/// each level k >= 1, the commutators [eta^{E_a}, L(M)] with M running over
/// the weight -root(a) basis of R^k have symbols spanning the weight-zero part
/// of R^k (no nonzero invariants). Put in reduced echelon form on their top
/// symbols, they determine the functional on pivot monomials by
/// l(pivot_i) = -sum_{m != pivot_i} R_i[m] l(m); all other monomials get 0.
/// Then l vanishes on every reducer and l(1) = 1, so l agrees with T on D.
class TraceFunctional {
 public:
  using Table = std::unordered_map<Monomial, Scalar, MonomialHash>;

  TraceFunctional(const DModuleSide& dm, int max_level) : model_(&dm.model()), max_level_(max_level) {
    const ClassicalSide& cs = dm.classical();
    if (max_level > cs.max_degree()) throw DimensionError("TraceFunctional: classical side not built to level");
    const std::size_t m = model_->m();
    table_.emplace(Monomial(2 * m), Scalar(1));
    const Weight zero = model_->zero_weight();
    const LieAlgebra& g = model_->lie();
    for (int k = 1; k <= max_level; ++k) {
      const RLevel& lvl = cs.level(k);
      const std::size_t target = lvl.dim(zero);
      if (target == 0) continue;
      Echelon<NoPayload> symbols;
      std::vector<std::pair<std::size_t, std::size_t>> chosen;  // (generator, index in R^k)
      for (std::size_t a = 0; a < g.dim() && symbols.rank() < target; ++a) {
        if (g.is_cartan(a)) continue;
        Weight neg = model_->root(a);
        for (int& x : neg) x = -x;
        auto it = lvl.by_weight.find(neg);
        if (it == lvl.by_weight.end()) continue;
        for (std::size_t j : it->second) {
          if (symbols.rank() == target) break;
          if (symbols.insert(poisson(model_->mu(a), lvl.elements[j]).terms(), {})) chosen.emplace_back(a, j);
        }
      }
      if (symbols.rank() < target)
        throw ConsistencyError("prop:T", "weight-zero symbols at level " + std::to_string(k) +
                                             " are not spanned by brackets; invariants beyond constants");
      Echelon<WeylOperator> reducers{WeylOperator(m)};
      for (auto [a, j] : chosen) {
        const WeylOperator r = dm.ad(a, dm.lift(lvl.sets[j]));
        reducers.insert(r.symbol(k).terms(), r);
      }
      std::vector<std::pair<Monomial, Scalar>> level_values;
      for (std::size_t r = 0; r < reducers.rank(); ++r) {
        const auto& row = reducers.rows()[r];
        const Monomial& piv = row.vec.leading().first;
        Scalar v;
        for (const auto& [mono, c] : row.payload.terms()) {
          if (mono == piv) continue;
          auto f = table_.find(mono);
          if (f != table_.end()) v -= c * f->second;
        }
        const Scalar pc = row.payload.terms().coefficient(piv);
        if (pc != Scalar(1)) throw std::logic_error("TraceFunctional: reducer pivot not normalized");
        if (!v.is_zero()) level_values.emplace_back(piv, v);
      }
      for (auto& [mono, v] : level_values) table_.emplace(mono, v);
      reducer_counts_.push_back(reducers.rank());
    }
  }

  /// Restores a functional from a stored table (a cache hit).
  TraceFunctional(const FlagModel& model, int max_level, Table table)
      : model_(&model), max_level_(max_level), table_(std::move(table)) {}

  int max_level() const { return max_level_; }
  const Table& table() const { return table_; }

  /// T(A) for A in D_{<=max_level}.
  Scalar operator()(const WeylOperator& a) const {
    if (a.order() > max_level_) throw OrderError("trace: operator order exceeds the computed level");
    Scalar s;
    for (const auto& [mono, c] : a.terms()) {
      auto it = table_.find(mono);
      if (it != table_.end()) s += c * it->second;
    }
    return s;
  }

  /// T(A B) without forming the product: only weight-complementary term pairs and
  /// monomials in the support of the functional contribute.
  Scalar pair(const WeylOperator& a, const WeylOperator& b) const {
    if (a.order() + b.order() > max_level_) throw OrderError("trace: product order exceeds the computed level");
    const std::size_t m = model_->m();
    std::map<Weight, std::vector<const Term*>> b_terms;
    for (const auto& t : b.terms()) b_terms[model_->weight(t.first)].push_back(&t);
    Scalar total;
    std::vector<int> kmax(m), kappa(m);
    for (const auto& ta : a.terms()) {
      Weight w = model_->weight(ta.first);
      for (int& x : w) x = -x;
      auto it = b_terms.find(w);
      if (it == b_terms.end()) continue;
      const Monomial& ma = ta.first;
      for (const Term* tb : it->second) {
        const Monomial& mb = tb->first;
        for (std::size_t k = 0; k < m; ++k) kmax[k] = std::min(ma[m + k], mb[k]);
        std::fill(kappa.begin(), kappa.end(), 0);
        Scalar partial;
        while (true) {
          Monomial r(2 * m);
          for (std::size_t k = 0; k < m; ++k) {
            r.set(k, ma[k] + mb[k] - kappa[k]);
            r.set(m + k, ma[m + k] + mb[m + k] - kappa[k]);
          }
          auto f = table_.find(r);
          if (f != table_.end()) {
            mpz_class wgt = 1;
            for (std::size_t k = 0; k < m; ++k)
              wgt *= detail::binomial(ma[m + k], kappa[k]) * detail::binomial(mb[k], kappa[k]) *
                     detail::factorial(kappa[k]);
            partial += Scalar(mpq_class(wgt)) * f->second;
          }
          std::size_t k = 0;
          while (k < m && ++kappa[k] > kmax[k]) kappa[k++] = 0;
          if (k == m) break;
        }
        if (!partial.is_zero()) total += ta.second * tb->second * partial;
      }
    }
    return total;
  }

  const std::vector<std::size_t>& reducer_counts() const { return reducer_counts_; }

 private:
  const FlagModel* model_;
  int max_level_;
  Table table_;
  std::vector<std::size_t> reducer_counts_;
};

}  // namespace flagstar
