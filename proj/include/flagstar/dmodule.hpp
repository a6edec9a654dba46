#pragma once

#include <map>
#include <mutex>
#include <vector>

#include "flagstar/classical.hpp"

namespace flagstar {

/// Filtered basis of D_{<=d}: the lifts L(M) = eta^{M_0} ... eta^{M_{k-1}} of the chosen multisets of R.
///
/// L(M) has principal symbol mu^M, so the lifts of levels <= d span D_{<=d}
/// once D_{<=d} is known to be closed under left multiplication by the eta^x;
/// verify_closure() checks exactly that. Coordinates are found by peeling
/// principal symbols from the top level down.
class DModuleSide {
 public:
  DModuleSide(const ClassicalSide& cs, int max_level) : cs_(&cs), max_level_(max_level) {
    if (max_level > cs.max_degree()) throw DimensionError("DModuleSide: classical side not built to level");
    offsets_.push_back(0);
    for (int k = 0; k <= max_level; ++k) {
      for (const auto& s : cs.level(k).sets) basis_.push_back(lift(s));
      offsets_.push_back(basis_.size());
    }
  }

  const ClassicalSide& classical() const { return *cs_; }
  const FlagModel& model() const { return cs_->model(); }
  int max_level() const { return max_level_; }

  /// dim D_{<=d}
  std::size_t dim(int d) const { return offsets_.at(static_cast<std::size_t>(d) + 1); }
  /// Global index of the first basis element of level k.
  std::size_t offset(int k) const { return offsets_.at(static_cast<std::size_t>(k)); }
  const WeylOperator& basis(std::size_t global) const { return basis_[global]; }
  int level_of(std::size_t global) const {
    int k = 0;
    while (offsets_[static_cast<std::size_t>(k) + 1] <= global) ++k;
    return k;
  }
  const Multiset& set_of(std::size_t global) const {
    const int k = level_of(global);
    return cs_->level(k).sets[global - offset(k)];
  }
  Weight weight_of(std::size_t global) const { return model().weight(set_of(global)); }

  /// eta-word of a multiset in its sorted order; memoized by suffix.
  WeylOperator lift(const Multiset& s) const {
    if (s.empty()) return WeylOperator::identity(model().m());
    {
      std::lock_guard<std::mutex> lock(memo_mutex_);
      auto it = memo_.find(s);
      if (it != memo_.end()) return it->second;
    }
    const Multiset tail(s.begin() + 1, s.end());
    WeylOperator op = model().eta(static_cast<std::size_t>(s.front())) * lift(tail);
    std::lock_guard<std::mutex> lock(memo_mutex_);
    return memo_.try_emplace(s, std::move(op)).first->second;
  }

  /// sigma(L(M)) = eta^{sigma(X_{M_0})} ... = (-1)^{|M|} times the word in sigma-indices, same order.
  WeylOperator sigma_lift(const Multiset& s) const {
    std::vector<int> w;
    for (int a : s) w.push_back(static_cast<int>(model().lie().sigma_index(static_cast<std::size_t>(a))));
    WeylOperator op = model().word(w);
    return s.size() % 2 == 0 ? op : -op;
  }

  /// Coordinates of A in the basis of D_{<=d}; throws when A is not in D_{<=d}.
  std::vector<Scalar> coordinates(WeylOperator a, int d) const {
    if (d > max_level_) throw DimensionError("DModuleSide: level not built");
    std::vector<Scalar> out(dim(d));
    const int order = a.order();
    if (order > d) throw ConsistencyError("prop:res", "operator order exceeds the filtration level");
    for (int k = order; k >= 0 && !a.is_zero(); --k) {
      const auto c = cs_->coordinates(a.symbol(k), k);
      for (std::size_t j = 0; j < c.size(); ++j) {
        if (c[j].is_zero()) continue;
        out[offset(k) + j] = c[j];
        a = a.axpy(-c[j], basis_[offset(k) + j]);
      }
      if (a.order() >= k) throw ConsistencyError("prop:res", "symbol peeling failed to lower the order");
    }
    return out;
  }

  bool contains(const WeylOperator& a, int d) const {
    try {
      coordinates(a, d);
      return true;
    } catch (const ConsistencyError&) {
      return false;
    }
  }

  WeylOperator element(const std::vector<Scalar>& coords) const {
    WeylOperator out(model().m());
    for (std::size_t j = 0; j < coords.size(); ++j)
      if (!coords[j].is_zero()) out = out.axpy(coords[j], basis_[j]);
    return out;
  }

  /// Anti-linear involution sigma, defined through the basis words.
  WeylOperator sigma(const WeylOperator& a, int d) const {
    const auto c = coordinates(a, d);
    WeylOperator out(model().m());
    for (std::size_t j = 0; j < c.size(); ++j)
      if (!c[j].is_zero()) out = out.axpy(c[j].conj(), sigma_lift(set_of(j)));
    return out;
  }

  /// [eta^{X_a}, A]
  WeylOperator ad(std::size_t a, const WeylOperator& op) const { return commutator(model().eta(a), op); }

  /// D_{<=d} is closed under left multiplication by every eta^x, so the lifts span it.
  bool verify_closure(int d) const {
    for (std::size_t j = 0; j < dim(d - 1); ++j)
      for (std::size_t a = 0; a < model().dim_g(); ++a)
        if (!contains(model().eta(a) * basis_[j], d)) return false;
    return true;
  }

 private:
  const ClassicalSide* cs_;
  int max_level_;
  std::vector<WeylOperator> basis_;
  std::vector<std::size_t> offsets_;
  mutable std::map<Multiset, WeylOperator> memo_;
  mutable std::mutex memo_mutex_;
};

}  // namespace flagstar
