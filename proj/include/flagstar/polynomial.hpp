#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "flagstar/terms.hpp"

namespace flagstar {

/// Variables z1..zm: functions on the big cell.
struct ZSpace {
  static std::string var_name(std::size_t k, std::size_t /*nvars*/) { return "z" + std::to_string(k + 1); }
};

/// Variables z1..zm, p1..pm: fiber-polynomial functions on the cotangent bundle of the big cell.
struct ZPSpace {
  static std::string var_name(std::size_t k, std::size_t nvars) {
    const std::size_t m = nvars / 2;
    return (k < m ? "z" : "p") + std::to_string(k % m + 1);
  }
};

/// Variables indexed by a basis of the Lie algebra: elements of the symmetric algebra.
struct SymSpace {
  static std::string var_name(std::size_t k, std::size_t /*nvars*/) { return "x" + std::to_string(k + 1); }
};

namespace detail {

inline std::string coefficient_text(const Scalar& c) {
  std::string s = c.to_string();
  if (!c.is_real() && sgn(c.real()) != 0) return "(" + s + ")";
  return s;
}

inline std::string join_terms(const std::vector<std::string>& parts) {
  if (parts.empty()) return "0";
  std::string out = parts.front();
  for (std::size_t k = 1; k < parts.size(); ++k) {
    const std::string& p = parts[k];
    if (p.front() == '-') {
      out += " - " + p.substr(1);
    } else {
      out += " + " + p;
    }
  }
  return out;
}

inline std::string term_text(const Scalar& c, const std::string& mono) {
  if (mono.empty()) return detail::coefficient_text(c);
  if (c.is_one()) return mono;
  if (c == Scalar(-1)) return "-" + mono;
  return coefficient_text(c) + "*" + mono;
}

}  // namespace detail

/// Sparse multivariate polynomial over Q(i) in a fixed number of variables.
///
/// The Space tag only controls variable naming and keeps polynomials on the
/// big cell, on its cotangent bundle and in S(g) from being mixed up.
template <class Space>
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::size_t nvars) : nvars_(nvars) {}
  Polynomial(std::size_t nvars, TermList terms) : nvars_(nvars), terms_(std::move(terms)) {}

  static Polynomial constant(std::size_t nvars, const Scalar& c) {
    return {nvars, TermList::single(Monomial(nvars), c)};
  }
  static Polynomial variable(std::size_t nvars, std::size_t k, const Scalar& c = Scalar(1)) {
    return {nvars, TermList::single(Monomial::variable(nvars, k), c)};
  }
  static Polynomial monomial(const Monomial& m, const Scalar& c = Scalar(1)) {
    return {m.size(), TermList::single(m, c)};
  }

  std::size_t nvars() const { return nvars_; }
  const TermList& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  Scalar coefficient(const Monomial& m) const { return terms_.coefficient(m); }

  int total_degree() const {
    int d = -1;
    for (const auto& t : terms_) d = std::max(d, t.first.degree());
    return d;
  }

  /// Constant term.
  Scalar constant_term() const { return terms_.coefficient(Monomial(nvars_)); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].first.degree() == 0); }

  Polynomial operator-() const { return {nvars_, terms_.scaled(Scalar(-1))}; }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    check(a, b);
    return {a.nvars_, a.terms_.axpy(Scalar(1), b.terms_)};
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    check(a, b);
    return {a.nvars_, a.terms_.axpy(Scalar(-1), b.terms_)};
  }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    check(a, b);
    TermAccumulator acc;
    for (const auto& s : a.terms_)
      for (const auto& t : b.terms_) acc.add(s.first * t.first, s.second * t.second);
    return {a.nvars_, acc.finish()};
  }
  friend Polynomial operator*(const Scalar& c, const Polynomial& a) { return {a.nvars_, a.terms_.scaled(c)}; }
  friend Polynomial operator*(const Polynomial& a, const Scalar& c) { return c * a; }

  Polynomial& operator+=(const Polynomial& b) { return *this = *this + b; }
  Polynomial& operator-=(const Polynomial& b) { return *this = *this - b; }

  /// this + c * b
  Polynomial axpy(const Scalar& c, const Polynomial& b) const {
    check(*this, b);
    return {nvars_, terms_.axpy(c, b.terms_)};
  }

  Polynomial pow(int k) const {
    Polynomial r = constant(nvars_, Scalar(1));
    for (int i = 0; i < k; ++i) r = r * *this;
    return r;
  }

  /// Partial derivative in variable k.
  Polynomial derivative(std::size_t k) const {
    std::vector<Term> raw;
    for (const auto& [m, c] : terms_) {
      const int e = m[k];
      if (e == 0) continue;
      Monomial r = m;
      r.set(k, e - 1);
      raw.emplace_back(r, c * Scalar(e));
    }
    return {nvars_, TermList::from_terms(std::move(raw))};
  }

  Polynomial conj() const {
    return {nvars_, terms_.map_coefficients([](const Monomial&, const Scalar& c) { return c.conj(); })};
  }

  template <class Pred>
  Polynomial filtered(Pred keep) const {
    return {nvars_, terms_.filtered(keep)};
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

  /// Canonical text: terms in descending graded-lex order.
  std::string to_string(const std::function<std::string(std::size_t)>& name = {}) const {
    std::vector<std::string> parts;
    for (auto it = terms_.terms().rbegin(); it != terms_.terms().rend(); ++it) {
      std::string mono;
      for (std::size_t k = 0; k < nvars_; ++k) {
        const int e = it->first[k];
        if (e == 0) continue;
        if (!mono.empty()) mono += '*';
        mono += name ? name(k) : Space::var_name(k, nvars_);
        if (e > 1) mono += '^' + std::to_string(e);
      }
      parts.push_back(detail::term_text(it->second, mono));
    }
    return detail::join_terms(parts);
  }

 private:
  static void check(const Polynomial& a, const Polynomial& b) {
    if (a.nvars_ != b.nvars_) throw DimensionError("Polynomial: variable count mismatch");
  }

  std::size_t nvars_ = 0;
  TermList terms_;
};

/// Polynomial in the big-cell coordinates z1..zm.
using PolyZ = Polynomial<ZSpace>;
/// Polynomial in z1..zm and fiber coordinates p1..pm (variables 0..m-1 are z, m..2m-1 are p).
using PolyZP = Polynomial<ZPSpace>;
/// Element of S(g), one variable per Lie algebra basis element.
using SymElement = Polynomial<SymSpace>;

/// Homogeneous components by degree in the fiber variables, ascending, zero parts omitted.
inline std::vector<std::pair<int, PolyZP>> p_degree_split(const PolyZP& a) {
  const std::size_t m = a.nvars() / 2;
  std::vector<std::pair<int, PolyZP>> out;
  int max_deg = -1;
  for (const auto& t : a.terms()) max_deg = std::max(max_deg, t.first.partial_degree(m, 2 * m));
  for (int d = 0; d <= max_deg; ++d) {
    PolyZP part = a.filtered([&](const Monomial& mono) { return mono.partial_degree(m, 2 * m) == d; });
    if (!part.is_zero()) out.emplace_back(d, std::move(part));
  }
  return out;
}

/// Degree-d part in the fiber variables.
inline PolyZP p_degree_part(const PolyZP& a, int d) {
  const std::size_t m = a.nvars() / 2;
  return a.filtered([&](const Monomial& mono) { return mono.partial_degree(m, 2 * m) == d; });
}

}  // namespace flagstar
