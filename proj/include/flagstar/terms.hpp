#pragma once

#include <algorithm>
#include <unordered_map>
#include <utility>
#include <vector>

#include "flagstar/monomial.hpp"
#include "flagstar/scalar.hpp"

namespace flagstar {

using Term = std::pair<Monomial, Scalar>;

/// Sparse linear combination of monomials.
///
/// Terms are kept sorted ascending in the graded-lex order with no zero
/// coefficients, so equality of values is equality of term vectors.
class TermList {
 public:
  TermList() = default;

  /// Takes arbitrary (unsorted, possibly repeated) terms and canonicalizes them.
  static TermList from_terms(std::vector<Term> raw) {
    std::sort(raw.begin(), raw.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
    TermList out;
    out.terms_.reserve(raw.size());
    for (auto& t : raw) {
      if (!out.terms_.empty() && out.terms_.back().first == t.first) {
        out.terms_.back().second += t.second;
      } else {
        if (!out.terms_.empty() && out.terms_.back().second.is_zero()) out.terms_.pop_back();
        out.terms_.push_back(std::move(t));
      }
    }
    if (!out.terms_.empty() && out.terms_.back().second.is_zero()) out.terms_.pop_back();
    return out;
  }

  static TermList single(Monomial m, Scalar c) {
    TermList out;
    if (!c.is_zero()) out.terms_.emplace_back(std::move(m), std::move(c));
    return out;
  }

  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  auto begin() const { return terms_.begin(); }
  auto end() const { return terms_.end(); }
  const Term& operator[](std::size_t k) const { return terms_[k]; }
  const std::vector<Term>& terms() const { return terms_; }

  /// Largest monomial; requires non-empty.
  const Term& leading() const { return terms_.back(); }

  Scalar coefficient(const Monomial& m) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                               [](const Term& t, const Monomial& key) { return t.first < key; });
    if (it != terms_.end() && it->first == m) return it->second;
    return {};
  }

  /// this + c * other
  TermList axpy(const Scalar& c, const TermList& other) const {
    if (c.is_zero() || other.empty()) return *this;
    TermList out;
    out.terms_.reserve(terms_.size() + other.terms_.size());
    auto a = terms_.begin();
    auto b = other.terms_.begin();
    while (a != terms_.end() || b != other.terms_.end()) {
      if (b == other.terms_.end() || (a != terms_.end() && a->first < b->first)) {
        out.terms_.push_back(*a++);
      } else if (a == terms_.end() || b->first < a->first) {
        out.terms_.emplace_back(b->first, c * b->second);
        ++b;
      } else {
        Scalar s = a->second + c * b->second;
        if (!s.is_zero()) out.terms_.emplace_back(a->first, std::move(s));
        ++a;
        ++b;
      }
    }
    return out;
  }

  TermList scaled(const Scalar& c) const {
    if (c.is_zero()) return {};
    TermList out(*this);
    for (auto& t : out.terms_) t.second *= c;
    return out;
  }

  template <class Pred>
  TermList filtered(Pred keep) const {
    TermList out;
    for (const auto& t : terms_)
      if (keep(t.first)) out.terms_.push_back(t);
    return out;
  }

  template <class Fn>
  TermList map_coefficients(Fn fn) const {
    TermList out;
    for (const auto& t : terms_) {
      Scalar c = fn(t.first, t.second);
      if (!c.is_zero()) out.terms_.emplace_back(t.first, std::move(c));
    }
    return out;
  }

  friend bool operator==(const TermList& a, const TermList& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const TermList& a, const TermList& b) { return !(a == b); }

 private:
  std::vector<Term> terms_;
};

/// Hash-based accumulator used while multiplying; finish() yields the canonical list.
class TermAccumulator {
 public:
  void add(const Monomial& m, const Scalar& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = acc_.try_emplace(m, c);
    if (!inserted) it->second += c;
  }

  void add(const TermList& terms, const Scalar& c = Scalar(1)) {
    for (const auto& t : terms) add(t.first, c * t.second);
  }

  TermList finish() {
    std::vector<Term> raw;
    raw.reserve(acc_.size());
    for (auto& [m, c] : acc_)
      if (!c.is_zero()) raw.emplace_back(m, std::move(c));
    acc_.clear();
    return TermList::from_terms(std::move(raw));
  }

 private:
  std::unordered_map<Monomial, Scalar, MonomialHash> acc_;
};

}  // namespace flagstar
