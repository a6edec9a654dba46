#pragma once

#include <string>
#include <utility>
#include <vector>

#include "flagstar/polynomial.hpp"

namespace flagstar {

/// Raised when an operator's order exceeds what an operation allows.
class OrderError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline const mpz_class& binomial(int n, int k) {
  static const std::vector<std::vector<mpz_class>> table = [] {
    std::vector<std::vector<mpz_class>> t(256);
    for (int a = 0; a < 256; ++a) {
      t[a].resize(a + 1);
      t[a][0] = t[a][a] = 1;
      for (int b = 1; b < a; ++b) t[a][b] = t[a - 1][b - 1] + t[a - 1][b];
    }
    return t;
  }();
  return table[n][k];
}

inline mpz_class factorial(int n) {
  mpz_class r = 1;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

/// Coefficients of d^b z^c = sum_k C(b,k) C(c,k) k! z^(c-k) d^(b-k) in one variable.
inline std::vector<std::pair<int, mpz_class>> reorder_weights(int b, int c) {
  std::vector<std::pair<int, mpz_class>> out;
  for (int k = 0; k <= std::min(b, c); ++k) out.emplace_back(k, binomial(b, k) * binomial(c, k) * factorial(k));
  return out;
}

}  // namespace detail

/// Differential operator in z1..zm with polynomial coefficients, normal ordered.
///
/// A term z^a d^b stores the exponent vector [a | b] (z exponents first), so
/// the same monomial keys serve the principal symbol z^a p^b. Equality of
/// operators is equality of normal-ordered term lists.
class WeylOperator {
 public:
  WeylOperator() = default;
  explicit WeylOperator(std::size_t m) : m_(m) {}
  WeylOperator(std::size_t m, TermList terms) : m_(m), terms_(std::move(terms)) {}

  static WeylOperator constant(std::size_t m, const Scalar& c) { return {m, TermList::single(Monomial(2 * m), c)}; }
  static WeylOperator identity(std::size_t m) { return constant(m, Scalar(1)); }
  /// Multiplication by z_k.
  static WeylOperator z(std::size_t m, std::size_t k) { return {m, TermList::single(Monomial::variable(2 * m, k), 1)}; }
  /// Partial derivative d/dz_k.
  static WeylOperator d(std::size_t m, std::size_t k) {
    return {m, TermList::single(Monomial::variable(2 * m, m + k), 1)};
  }
  /// Multiplication operator by a function of z.
  static WeylOperator multiplication(const PolyZ& f) {
    const std::size_t m = f.nvars();
    std::vector<Term> raw;
    for (const auto& [mono, c] : f.terms()) raw.emplace_back(Monomial::concat(mono, Monomial(m)), c);
    return {m, TermList::from_terms(std::move(raw))};
  }
  /// Vector field sum_k coeffs[k] * d/dz_k.
  static WeylOperator vector_field(const std::vector<PolyZ>& coeffs) {
    const std::size_t m = coeffs.size();
    std::vector<Term> raw;
    for (std::size_t k = 0; k < m; ++k)
      for (const auto& [mono, c] : coeffs[k].terms())
        raw.emplace_back(Monomial::concat(mono, Monomial::variable(m, k)), c);
    return {m, TermList::from_terms(std::move(raw))};
  }

  std::size_t nvars() const { return m_; }
  const TermList& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  /// Maximal total derivative degree; -1 for the zero operator.
  int order() const {
    int o = -1;
    for (const auto& t : terms_) o = std::max(o, t.first.partial_degree(m_, 2 * m_));
    return o;
  }

  /// Maximal z-degree of the coefficients.
  int coefficient_degree() const {
    int o = -1;
    for (const auto& t : terms_) o = std::max(o, t.first.partial_degree(0, m_));
    return o;
  }

  bool is_scalar() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].first.degree() == 0); }
  Scalar constant_term() const { return terms_.coefficient(Monomial(2 * m_)); }

  /// Coefficient of d^beta as a function of z.
  PolyZ coefficient_of(const Monomial& beta) const {
    std::vector<Term> raw;
    for (const auto& [mono, c] : terms_)
      if (mono.slice(m_, 2 * m_) == beta) raw.emplace_back(mono.slice(0, m_), c);
    return {m_, TermList::from_terms(std::move(raw))};
  }

  WeylOperator operator-() const { return {m_, terms_.scaled(Scalar(-1))}; }
  friend WeylOperator operator+(const WeylOperator& a, const WeylOperator& b) {
    check(a, b);
    return {a.m_, a.terms_.axpy(Scalar(1), b.terms_)};
  }
  friend WeylOperator operator-(const WeylOperator& a, const WeylOperator& b) {
    check(a, b);
    return {a.m_, a.terms_.axpy(Scalar(-1), b.terms_)};
  }
  friend WeylOperator operator*(const Scalar& c, const WeylOperator& a) { return {a.m_, a.terms_.scaled(c)}; }
  WeylOperator& operator+=(const WeylOperator& b) { return *this = *this + b; }
  WeylOperator& operator-=(const WeylOperator& b) { return *this = *this - b; }
  WeylOperator scaled(const Scalar& c) const { return {m_, terms_.scaled(c)}; }
  WeylOperator axpy(const Scalar& c, const WeylOperator& b) const {
    check(*this, b);
    return {m_, terms_.axpy(c, b.terms_)};
  }

  /// Normal-ordered composition a∘b.
  friend WeylOperator compose(const WeylOperator& a, const WeylOperator& b) {
    check(a, b);
    const std::size_t m = a.m_;
    TermAccumulator acc;
    std::vector<std::vector<std::pair<int, mpz_class>>> weights(m);
    std::vector<std::size_t> idx(m);
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) {
        const Scalar c = ca * cb;
        // d^beta (from a) meets z^gamma (from b)
        for (std::size_t k = 0; k < m; ++k) weights[k] = detail::reorder_weights(ma[m + k], mb[k]);
        std::fill(idx.begin(), idx.end(), 0);
        while (true) {
          Monomial r(2 * m);
          mpz_class w = 1;
          for (std::size_t k = 0; k < m; ++k) {
            const auto& [kappa, wk] = weights[k][idx[k]];
            w *= wk;
            r.set(k, ma[k] + mb[k] - kappa);
            r.set(m + k, ma[m + k] - kappa + mb[m + k]);
          }
          acc.add(r, c * Scalar(mpq_class(w)));
          std::size_t k = 0;
          while (k < m && ++idx[k] == weights[k].size()) idx[k++] = 0;
          if (k == m) break;
        }
      }
    }
    return {m, acc.finish()};
  }
  friend WeylOperator operator*(const WeylOperator& a, const WeylOperator& b) { return compose(a, b); }

  /// Formal transpose: the anti-automorphism fixing z_k and sending d_k to -d_k.
  WeylOperator transpose() const {
    const std::size_t m = m_;
    TermAccumulator acc;
    std::vector<std::vector<std::pair<int, mpz_class>>> weights(m);
    std::vector<std::size_t> idx(m);
    for (const auto& [mono, c] : terms_) {
      const int order = mono.partial_degree(m, 2 * m);
      const Scalar sc = (order % 2 == 0) ? c : -c;
      // (-1)^|b| d^b z^a
      for (std::size_t k = 0; k < m; ++k) weights[k] = detail::reorder_weights(mono[m + k], mono[k]);
      std::fill(idx.begin(), idx.end(), 0);
      while (true) {
        Monomial r(2 * m);
        mpz_class w = 1;
        for (std::size_t k = 0; k < m; ++k) {
          const auto& [kappa, wk] = weights[k][idx[k]];
          w *= wk;
          r.set(k, mono[k] - kappa);
          r.set(m + k, mono[m + k] - kappa);
        }
        acc.add(r, sc * Scalar(mpq_class(w)));
        std::size_t k = 0;
        while (k < m && ++idx[k] == weights[k].size()) idx[k++] = 0;
        if (k == m) break;
      }
    }
    return {m, acc.finish()};
  }

  /// Coefficientwise complex conjugation.
  WeylOperator bar() const {
    return {m_, terms_.map_coefficients([](const Monomial&, const Scalar& c) { return c.conj(); })};
  }

  /// Degree-d part of the symbol: z^a d^b with |b| = d becomes z^a p^b.
  PolyZP symbol(int d) const {
    if (order() > d) throw OrderError("symbol: operator order " + std::to_string(order()) + " exceeds " + std::to_string(d));
    return {2 * m_, terms_.filtered([&](const Monomial& mono) { return mono.partial_degree(m_, 2 * m_) == d; })};
  }

  /// Terms of derivative order exactly d, kept as an operator.
  WeylOperator order_part(int d) const {
    return {m_, terms_.filtered([&](const Monomial& mono) { return mono.partial_degree(m_, 2 * m_) == d; })};
  }

  /// Applies the operator to a function of z.
  PolyZ apply(const PolyZ& f) const {
    if (f.nvars() != m_) throw DimensionError("apply: variable count mismatch");
    PolyZ out(m_);
    for (const auto& [mono, c] : terms_) {
      PolyZ g = f;
      for (std::size_t k = 0; k < m_ && !g.is_zero(); ++k)
        for (int e = 0; e < mono[m_ + k]; ++e) g = g.derivative(k);
      if (g.is_zero()) continue;
      out += PolyZ::monomial(mono.slice(0, m_), c) * g;
    }
    return out;
  }

  friend bool operator==(const WeylOperator& a, const WeylOperator& b) { return a.m_ == b.m_ && a.terms_ == b.terms_; }
  friend bool operator!=(const WeylOperator& a, const WeylOperator& b) { return !(a == b); }

  /// Canonical text, derivatives written d1..dm after the z factors.
  std::string to_string() const {
    std::vector<std::string> parts;
    for (auto it = terms_.terms().rbegin(); it != terms_.terms().rend(); ++it) {
      std::string mono;
      for (std::size_t k = 0; k < 2 * m_; ++k) {
        const int e = it->first[k];
        if (e == 0) continue;
        if (!mono.empty()) mono += '*';
        mono += (k < m_ ? "z" : "d") + std::to_string(k % m_ + 1);
        if (e > 1) mono += '^' + std::to_string(e);
      }
      parts.push_back(detail::term_text(it->second, mono));
    }
    return detail::join_terms(parts);
  }

 private:
  static void check(const WeylOperator& a, const WeylOperator& b) {
    if (a.m_ != b.m_) throw DimensionError("WeylOperator: variable count mismatch");
  }

  std::size_t m_ = 0;
  TermList terms_;
};

inline WeylOperator commutator(const WeylOperator& a, const WeylOperator& b) { return a * b - b * a; }

}  // namespace flagstar
