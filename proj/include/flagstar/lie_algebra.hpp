#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "flagstar/dense.hpp"
#include "flagstar/echelon.hpp"
#include "flagstar/polynomial.hpp"

namespace flagstar {

/// Sorted list of basis indices naming a commutative monomial X_{a1}...X_{ad} in S(g).
using Multiset = std::vector<int>;

inline Monomial multiset_monomial(const Multiset& m, std::size_t dim) {
  Monomial out(dim);
  for (int a : m) out.set(static_cast<std::size_t>(a), out[static_cast<std::size_t>(a)] + 1);
  return out;
}

inline Multiset monomial_multiset(const Monomial& mono) {
  Multiset out;
  for (std::size_t a = 0; a < mono.size(); ++a)
    for (int e = 0; e < mono[a]; ++e) out.push_back(static_cast<int>(a));
  return out;
}

/// Distinct orderings of a multiset.
inline std::vector<std::vector<int>> distinct_orderings(Multiset m) {
  std::sort(m.begin(), m.end());
  std::vector<std::vector<int>> out;
  do out.push_back(m);
  while (std::next_permutation(m.begin(), m.end()));
  return out;
}

/// sl_n with the basis E_ij (i != j, row-major) followed by H_i = E_ii - E_{i+1,i+1}.
///
/// Elements are coefficient vectors in this basis. The real span of the basis
/// is sl_n(R), so complex conjugation of an element conjugates coordinates.
class LieAlgebra {
 public:
  explicit LieAlgebra(int n) : n_(n) {
    if (n < 2) throw DimensionError("LieAlgebra: n must be at least 2");
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        Matrix e(n, n);
        e(i, j) = 1;
        basis_.push_back(e);
        names_.push_back("E" + std::to_string(i + 1) + std::to_string(j + 1));
        entries_.push_back({i, j});
      }
    for (int i = 0; i + 1 < n; ++i) {
      Matrix h(n, n);
      h(i, i) = 1;
      h(i + 1, i + 1) = -1;
      basis_.push_back(h);
      names_.push_back("H" + std::to_string(i + 1));
      entries_.push_back({i, i});
    }
    const std::size_t d = dim();
    structure_.resize(d * d);
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b)
        structure_[a * d + b] = SparseVector::from_dense(coordinates(basis_[a] * basis_[b] - basis_[b] * basis_[a]));
    killing_ = Matrix(d, d);
    frobenius_ = Matrix(d, d);
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b) {
        killing_(a, b) = trace(basis_[a] * basis_[b]);
        frobenius_(a, b) = trace(basis_[a].transpose() * basis_[b]);
      }
  }

  int n() const { return n_; }
  std::size_t dim() const { return basis_.size(); }
  std::size_t rank() const { return static_cast<std::size_t>(n_ - 1); }
  const Matrix& matrix(std::size_t a) const { return basis_[a]; }
  const std::string& name(std::size_t a) const { return names_[a]; }

  bool is_cartan(std::size_t a) const { return a + rank() >= dim(); }
  /// Index of E_ij (0-based i != j).
  std::size_t e_index(int i, int j) const {
    if (i == j || i < 0 || j < 0 || i >= n_ || j >= n_) throw DimensionError("LieAlgebra: bad E index");
    return static_cast<std::size_t>(i * (n_ - 1) + (j < i ? j : j - 1));
  }
  /// Index of H_i (0-based i < n-1).
  std::size_t h_index(int i) const { return static_cast<std::size_t>(n_ * (n_ - 1) + i); }
  /// Matrix position (i, j) of E_ij; for H_i returns (i, i).
  std::pair<int, int> entry(std::size_t a) const { return entries_[a]; }

  /// Looks up a basis element by name: "E12", "E_12", "E1_2", "H1", "H_1".
  std::optional<std::size_t> find(std::string name) const {
    name.erase(std::remove(name.begin(), name.end(), '_'), name.end());
    for (std::size_t a = 0; a < dim(); ++a)
      if (names_[a] == name) return a;
    return std::nullopt;
  }

  /// Coordinates of a trace-free matrix.
  std::vector<Scalar> coordinates(const Matrix& m) const {
    std::vector<Scalar> c(dim());
    Scalar tr;
    for (int i = 0; i < n_; ++i) tr += m(i, i);
    if (!tr.is_zero()) throw DimensionError("LieAlgebra: matrix is not trace-free");
    for (std::size_t a = 0; a < dim(); ++a)
      if (!is_cartan(a)) c[a] = m(entries_[a].first, entries_[a].second);
    Scalar partial;
    for (int i = 0; i + 1 < n_; ++i) {
      partial += m(i, i);
      c[h_index(i)] = partial;
    }
    return c;
  }

  Matrix to_matrix(const std::vector<Scalar>& x) const {
    Matrix m(n_, n_);
    for (std::size_t a = 0; a < dim(); ++a)
      if (!x[a].is_zero())
        for (int i = 0; i < n_; ++i)
          for (int j = 0; j < n_; ++j)
            if (!basis_[a](i, j).is_zero()) m(i, j) += x[a] * basis_[a](i, j);
    return m;
  }

  std::vector<Scalar> unit(std::size_t a) const {
    std::vector<Scalar> v(dim());
    v[a] = 1;
    return v;
  }

  /// [X_a, X_b] in coordinates.
  const SparseVector& bracket_basis(std::size_t a, std::size_t b) const { return structure_[a * dim() + b]; }

  std::vector<Scalar> bracket(const std::vector<Scalar>& x, const std::vector<Scalar>& y) const {
    std::vector<Scalar> out(dim());
    for (std::size_t a = 0; a < dim(); ++a) {
      if (x[a].is_zero()) continue;
      for (std::size_t b = 0; b < dim(); ++b) {
        if (y[b].is_zero()) continue;
        const Scalar c = x[a] * y[b];
        for (const auto& [k, s] : bracket_basis(a, b)) out[k] += c * s;
      }
    }
    return out;
  }

  /// sigma(X_a) = -X_a^T on the basis: E_ij -> -E_ji, H_i -> -H_i.
  std::size_t sigma_index(std::size_t a) const {
    if (is_cartan(a)) return a;
    return e_index(entries_[a].second, entries_[a].first);
  }

  /// Cartan involution x -> -conj(x)^T, anti-linear.
  std::vector<Scalar> cartan_involution(const std::vector<Scalar>& x) const {
    std::vector<Scalar> out(dim());
    for (std::size_t a = 0; a < dim(); ++a)
      if (!x[a].is_zero()) out[sigma_index(a)] -= x[a].conj();
    return out;
  }

  /// (x, y) = tr(xy).
  Scalar trace_form(const std::vector<Scalar>& x, const std::vector<Scalar>& y) const {
    Scalar s;
    for (std::size_t a = 0; a < dim(); ++a)
      for (std::size_t b = 0; b < dim(); ++b)
        if (!x[a].is_zero() && !y[b].is_zero() && !killing_(a, b).is_zero()) s += x[a] * y[b] * killing_(a, b);
    return s;
  }
  const Matrix& trace_form_matrix() const { return killing_; }

  /// ad_x acting on S(g) as a derivation.
  SymElement ad(const std::vector<Scalar>& x, const SymElement& f) const {
    SymElement out(dim());
    for (std::size_t b = 0; b < dim(); ++b) {
      SymElement df = f.derivative(b);
      if (df.is_zero()) continue;
      out += df * linear(bracket(x, unit(b)));
    }
    return out;
  }

  /// Linear element sum x_a X_a of S^1(g).
  SymElement linear(const std::vector<Scalar>& x) const {
    std::vector<Term> raw;
    for (std::size_t a = 0; a < dim(); ++a)
      if (!x[a].is_zero()) raw.emplace_back(Monomial::variable(dim(), a), x[a]);
    return {dim(), TermList::from_terms(std::move(raw))};
  }

  /// Substitutes images[a] for X_a.
  template <class Poly>
  static Poly substitute(const SymElement& f, const std::vector<Poly>& images, std::size_t target_vars) {
    Poly out(target_vars);
    for (const auto& [mono, c] : f.terms()) {
      Poly t = Poly::constant(target_vars, c);
      for (std::size_t a = 0; a < mono.size(); ++a)
        for (int e = 0; e < mono[a]; ++e) t = t * images[a];
      out += t;
    }
    return out;
  }

  /// Power traces tr(x^k), k = 2..n, moved to S(g) through the trace form.
  ///
  /// The coordinate function t_a of x = sum t_a X_a corresponds to the dual
  /// basis element X^a with tr(X^a X_b) = delta_ab.
  std::vector<SymElement> casimirs() const {
    const std::size_t d = dim();
    std::vector<std::vector<SymElement>> x(n_, std::vector<SymElement>(n_, SymElement(d)));
    for (std::size_t a = 0; a < d; ++a)
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
          if (!basis_[a](i, j).is_zero()) x[i][j] += SymElement::variable(d, a, basis_[a](i, j));
    const Matrix dual = inverse(killing_);
    std::vector<SymElement> images;
    for (std::size_t a = 0; a < d; ++a) images.push_back(linear(dual.row(a)));
    std::vector<SymElement> out;
    auto power = x;
    for (int k = 2; k <= n_; ++k) {
      auto next = power;
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) {
          SymElement s(d);
          for (int l = 0; l < n_; ++l) s += power[i][l] * x[l][j];
          next[i][j] = s;
        }
      power = next;
      SymElement tr(d);
      for (int i = 0; i < n_; ++i) tr += power[i][i];
      out.push_back(substitute(tr, images, d));
    }
    return out;
  }

  /// Fischer pairing bh(f, g) = d_g(f), where d_{X_a} = sum_b F_ab d/dX_b with
  /// F_ab = -(sigma(X_a), X_b); anti-linear in g.
  Scalar fischer_pair(const SymElement& f, const SymElement& g) const {
    Scalar total;
    for (const auto& [mono, c] : g.terms()) {
      if (mono.degree() != f.total_degree() && !f.is_zero()) continue;
      SymElement cur = f;
      for (std::size_t a = 0; a < mono.size() && !cur.is_zero(); ++a)
        for (int e = 0; e < mono[a] && !cur.is_zero(); ++e) cur = fischer_derivative(a, cur);
      total += c.conj() * cur.constant_term();
    }
    return total;
  }

  /// Constant-coefficient derivation d_{X_a} of the Fischer pairing.
  SymElement fischer_derivative(std::size_t a, const SymElement& f) const {
    SymElement out(dim());
    for (std::size_t b = 0; b < dim(); ++b)
      if (!frobenius_(a, b).is_zero()) out += frobenius_(a, b) * f.derivative(b);
    return out;
  }

 private:
  static Scalar trace(const Matrix& m) {
    Scalar s;
    for (std::size_t i = 0; i < m.rows(); ++i) s += m(i, i);
    return s;
  }

  int n_;
  std::vector<Matrix> basis_;
  std::vector<std::string> names_;
  std::vector<std::pair<int, int>> entries_;
  std::vector<SparseVector> structure_;
  Matrix killing_;
  Matrix frobenius_;
};

}  // namespace flagstar
