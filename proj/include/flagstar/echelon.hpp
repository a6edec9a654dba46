#pragma once

#include <unordered_map>
#include <utility>
#include <vector>

#include "flagstar/terms.hpp"

namespace flagstar {

/// Sparse coefficient vector indexed by integers, sorted by index.
class SparseVector {
 public:
  SparseVector() = default;

  static SparseVector unit(std::size_t k, const Scalar& c = Scalar(1)) {
    SparseVector v;
    if (!c.is_zero()) v.entries_.emplace_back(k, c);
    return v;
  }
  static SparseVector from_dense(const std::vector<Scalar>& dense) {
    SparseVector v;
    for (std::size_t k = 0; k < dense.size(); ++k)
      if (!dense[k].is_zero()) v.entries_.emplace_back(k, dense[k]);
    return v;
  }

  bool empty() const { return entries_.empty(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }
  std::size_t size() const { return entries_.size(); }

  Scalar operator[](std::size_t k) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), k,
                               [](const auto& e, std::size_t key) { return e.first < key; });
    if (it != entries_.end() && it->first == k) return it->second;
    return {};
  }

  std::vector<Scalar> to_dense(std::size_t n) const {
    std::vector<Scalar> out(n);
    for (const auto& [k, c] : entries_) out.at(k) = c;
    return out;
  }

  SparseVector scaled(const Scalar& c) const {
    if (c.is_zero()) return {};
    SparseVector out(*this);
    for (auto& e : out.entries_) e.second *= c;
    return out;
  }

  /// this + c * o
  SparseVector axpy(const Scalar& c, const SparseVector& o) const {
    if (c.is_zero() || o.empty()) return *this;
    SparseVector out;
    auto a = entries_.begin();
    auto b = o.entries_.begin();
    while (a != entries_.end() || b != o.entries_.end()) {
      if (b == o.entries_.end() || (a != entries_.end() && a->first < b->first)) {
        out.entries_.push_back(*a++);
      } else if (a == entries_.end() || b->first < a->first) {
        out.entries_.emplace_back(b->first, c * b->second);
        ++b;
      } else {
        Scalar s = a->second + c * b->second;
        if (!s.is_zero()) out.entries_.emplace_back(a->first, std::move(s));
        ++a;
        ++b;
      }
    }
    return out;
  }

  friend bool operator==(const SparseVector& a, const SparseVector& b) { return a.entries_ == b.entries_; }

 private:
  std::vector<std::pair<std::size_t, Scalar>> entries_;
};

/// Payload for spans where only the row space matters.
struct NoPayload {
  NoPayload scaled(const Scalar&) const { return {}; }
  NoPayload axpy(const Scalar&, const NoPayload&) const { return {}; }
};

/// Incremental reduced row echelon form over monomial-indexed sparse rows.
///
/// Each row's pivot is its largest monomial, normalized to coefficient 1, and
/// no row contains another row's pivot. Every row carries a payload that is
/// transformed along with it, so a row always equals the combination of
/// inserted vectors recorded in its payload.
template <class Payload>
class Echelon {
 public:
  struct Row {
    TermList vec;
    Payload payload;
  };

  struct Reduction {
    TermList residual;
    Payload combination;  // sum of c_i * payload_i over the rows subtracted
  };

  explicit Echelon(Payload zero = Payload{}) : zero_(std::move(zero)) {}

  std::size_t rank() const { return rows_.size(); }
  const std::vector<Row>& rows() const { return rows_; }
  const Monomial& pivot(std::size_t r) const { return rows_[r].vec.leading().first; }
  bool is_pivot(const Monomial& m) const { return index_.count(m) != 0; }

  /// v = (sum of c_i row_i) + residual where the residual avoids all pivots.
  Reduction reduce(const TermList& v) const {
    TermList subtract;
    std::vector<Term> coeffs;
    Payload combo = zero_;
    TermAccumulator acc;
    bool any = false;
    for (const auto& [m, c] : v) {
      auto it = index_.find(m);
      if (it == index_.end()) continue;
      const Row& row = rows_[it->second];
      acc.add(row.vec, c);
      combo = combo.axpy(c, row.payload);
      any = true;
    }
    if (!any) return {v, std::move(combo)};
    return {v.axpy(Scalar(-1), acc.finish()), std::move(combo)};
  }

  bool in_span(const TermList& v) const { return reduce(v).residual.empty(); }

  /// Inserts v with the given payload. Returns false (and changes nothing) when v is dependent.
  bool insert(const TermList& v, const Payload& payload) {
    Reduction red = reduce(v);
    if (red.residual.empty()) return false;
    const Scalar inv = Scalar(1) / red.residual.leading().second;
    Row row{red.residual.scaled(inv), payload.axpy(Scalar(-1), red.combination).scaled(inv)};
    const Monomial piv = row.vec.leading().first;
    for (auto& other : rows_) {
      const Scalar c = other.vec.coefficient(piv);
      if (c.is_zero()) continue;
      other.vec = other.vec.axpy(-c, row.vec);
      other.payload = other.payload.axpy(-c, row.payload);
    }
    index_.emplace(piv, rows_.size());
    rows_.push_back(std::move(row));
    return true;
  }

 private:
  Payload zero_;
  std::vector<Row> rows_;
  std::unordered_map<Monomial, std::size_t, MonomialHash> index_;
};

}  // namespace flagstar
