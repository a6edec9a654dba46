#pragma once

#include <map>
#include <string>
#include <vector>

#include "flagstar/lie_algebra.hpp"
#include "flagstar/weyl_operator.hpp"

namespace flagstar {

/// Weight of an H_i-eigenvector: the eigenvalue under ad of each H_i.
using Weight = std::vector<int>;

/// Flag type d_1 < ... < d_s of subspaces of C^n.
struct FlagConfig {
  int n = 2;
  std::vector<int> dims{1};

  static FlagConfig projective(int n) { return {n, {1}}; }
  static FlagConfig full(int n) {
    FlagConfig c{n, {}};
    for (int k = 1; k < n; ++k) c.dims.push_back(k);
    return c;
  }

  void validate() const {
    if (n < 2) throw std::invalid_argument("flag config: n must be at least 2");
    if (dims.empty()) throw std::invalid_argument("flag config: dims must be non-empty");
    for (std::size_t k = 0; k < dims.size(); ++k) {
      if (dims[k] < 1 || dims[k] > n - 1) throw std::invalid_argument("flag config: dims must lie in 1..n-1");
      if (k > 0 && dims[k] <= dims[k - 1]) throw std::invalid_argument("flag config: dims must be strictly increasing");
    }
  }

  /// Block label of each row index.
  std::vector<int> blocks() const {
    std::vector<int> out(n);
    int b = 0;
    for (int i = 0; i < n; ++i) {
      while (b < static_cast<int>(dims.size()) && i >= dims[b]) ++b;
      out[i] = b;
    }
    return out;
  }

  /// Free entries (i, j) of the lower block-unitriangular big-cell matrix, row-major.
  std::vector<std::pair<int, int>> positions() const {
    const auto blk = blocks();
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (blk[i] > blk[j]) out.emplace_back(i, j);
    return out;
  }

  std::size_t manifold_dim() const { return positions().size(); }

  bool is_projective() const { return dims.size() == 1 && dims[0] == 1; }
  bool is_grassmannian() const { return dims.size() == 1; }

  std::string label() const {
    std::string s = "sl" + std::to_string(n) + "[";
    for (std::size_t k = 0; k < dims.size(); ++k) s += (k ? "," : "") + std::to_string(dims[k]);
    return s + "]";
  }
};

/// The big-cell realization of g acting on half-densities of X = SL_n / P.
///
/// The big cell is g(z) = 1 + sum z_k E_{pos_k}, lower block-unitriangular.
/// The field of x is v = g [g^{-1} x^T g]_-, read off at the free positions,
/// where [.]_- keeps the free block-lower entries. This is a Lie algebra
/// homomorphism into vector fields; the transpose accounts for the left action
/// becoming a right action on coordinates.
class FlagModel {
 public:
  explicit FlagModel(FlagConfig config) : config_(std::move(config)), lie_((config_.validate(), config_.n)) {
    positions_ = config_.positions();
    m_ = positions_.size();
    if (2 * m_ > Monomial::kCapacity) throw DimensionError("FlagModel: manifold dimension exceeds monomial capacity");
    build_fields();
    build_weights();
  }

  const FlagConfig& config() const { return config_; }
  const LieAlgebra& lie() const { return lie_; }
  std::size_t m() const { return m_; }
  std::size_t dim_g() const { return lie_.dim(); }
  const std::vector<std::pair<int, int>>& positions() const { return positions_; }

  const WeylOperator& xi(std::size_t a) const { return xi_[a]; }
  const WeylOperator& eta(std::size_t a) const { return eta_[a]; }
  const PolyZP& mu(std::size_t a) const { return mu_[a]; }

  /// Image of a general element x = sum x_a X_a.
  WeylOperator eta(const std::vector<Scalar>& x) const {
    WeylOperator out(m_);
    for (std::size_t a = 0; a < dim_g(); ++a)
      if (!x[a].is_zero()) out = out.axpy(x[a], eta_[a]);
    return out;
  }
  PolyZP mu(const std::vector<Scalar>& x) const {
    PolyZP out(2 * m_);
    for (std::size_t a = 0; a < dim_g(); ++a)
      if (!x[a].is_zero()) out = out.axpy(x[a], mu_[a]);
    return out;
  }

  /// eta^{w_0} ... eta^{w_{k-1}}
  WeylOperator word(const std::vector<int>& w) const {
    WeylOperator out = WeylOperator::identity(m_);
    for (auto it = w.rbegin(); it != w.rend(); ++it) out = eta_[static_cast<std::size_t>(*it)] * out;
    return out;
  }

  /// Average of the eta-words over all distinct orderings of a multiset.
  WeylOperator symmetrized_word(const Multiset& mset) const {
    const auto orders = distinct_orderings(mset);
    WeylOperator out(m_);
    for (const auto& w : orders) out += word(w);
    return Scalar(mpq_class(1, static_cast<long>(orders.size()))) * out;
  }

  /// Symmetrized image of an element of S(g).
  WeylOperator symmetrized(const SymElement& f) const {
    WeylOperator out(m_);
    for (const auto& [mono, c] : f.terms()) out = out.axpy(c, symmetrized_word(monomial_multiset(mono)));
    return out;
  }

  /// mu-substitution S(g) -> R.
  PolyZP substitute(const SymElement& f) const { return LieAlgebra::substitute(f, mu_, 2 * m_); }

  /// Image of a casimir; it must be a scalar operator.
  WeylOperator casimir_operator(const SymElement& c) const {
    WeylOperator op = symmetrized(c);
    if (!op.is_scalar()) throw std::logic_error("casimir image is not a scalar operator: " + op.to_string());
    return op;
  }

  /// Weight of the basis element X_a.
  const Weight& root(std::size_t a) const { return roots_[a]; }
  /// Weight of the coordinate z_k.
  Weight coordinate_weight(std::size_t k) const {
    Weight w(lie_.rank());
    for (std::size_t i = 0; i < lie_.rank(); ++i) w[i] = lambda_[i][k];
    return w;
  }
  /// Weight of z^a d^b (or z^a p^b): sum of lambda_k (a_k - b_k).
  Weight weight(const Monomial& mono) const {
    Weight w(lie_.rank(), 0);
    for (std::size_t i = 0; i < lie_.rank(); ++i)
      for (std::size_t k = 0; k < m_; ++k) w[i] += lambda_[i][k] * (mono[k] - mono[m_ + k]);
    return w;
  }
  Weight weight(const Multiset& mset) const {
    Weight w(lie_.rank(), 0);
    for (int a : mset)
      for (std::size_t i = 0; i < lie_.rank(); ++i) w[i] += roots_[static_cast<std::size_t>(a)][i];
    return w;
  }
  Weight zero_weight() const { return Weight(lie_.rank(), 0); }

 private:
  using PolyMatrix = std::vector<std::vector<PolyZ>>;

  PolyMatrix multiply(const PolyMatrix& a, const PolyMatrix& b) const {
    const int n = config_.n;
    PolyMatrix out(n, std::vector<PolyZ>(n, PolyZ(m_)));
    for (int i = 0; i < n; ++i)
      for (int l = 0; l < n; ++l) {
        if (a[i][l].is_zero()) continue;
        for (int j = 0; j < n; ++j)
          if (!b[l][j].is_zero()) out[i][j] += a[i][l] * b[l][j];
      }
    return out;
  }

  void build_fields() {
    const int n = config_.n;
    PolyMatrix g(n, std::vector<PolyZ>(n, PolyZ(m_)));
    PolyMatrix neg_nil(n, std::vector<PolyZ>(n, PolyZ(m_)));
    PolyMatrix ident(n, std::vector<PolyZ>(n, PolyZ(m_)));
    for (int i = 0; i < n; ++i) g[i][i] = ident[i][i] = PolyZ::constant(m_, 1);
    for (std::size_t k = 0; k < m_; ++k) {
      auto [i, j] = positions_[k];
      g[i][j] = PolyZ::variable(m_, k);
      neg_nil[i][j] = PolyZ::variable(m_, k, Scalar(-1));
    }
    // g^{-1} = sum_k (-N)^k with N = g - 1 nilpotent
    PolyMatrix ginv = ident;
    PolyMatrix term = ident;
    for (int k = 1; k < n; ++k) {
      term = multiply(term, neg_nil);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) ginv[i][j] += term[i][j];
    }
    const auto blk = config_.blocks();
    for (std::size_t a = 0; a < lie_.dim(); ++a) {
      PolyMatrix y(n, std::vector<PolyZ>(n, PolyZ(m_)));
      const Matrix& x = lie_.matrix(a);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (!x(j, i).is_zero()) y[i][j] = PolyZ::constant(m_, x(j, i));
      PolyMatrix conj = multiply(multiply(ginv, y), g);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (!(blk[i] > blk[j])) conj[i][j] = PolyZ(m_);
      const PolyMatrix v = multiply(g, conj);
      std::vector<PolyZ> coeffs;
      for (auto [i, j] : positions_) coeffs.push_back(v[i][j]);
      xi_.push_back(WeylOperator::vector_field(coeffs));
      eta_.push_back(half_density_twist(xi_.back()));
      mu_.push_back(eta_.back().symbol(1));
    }
  }

  void build_weights() {
    const std::size_t r = lie_.rank();
    lambda_.assign(r, std::vector<int>(m_, 0));
    for (std::size_t i = 0; i < r; ++i) {
      const WeylOperator& h = xi_[lie_.h_index(static_cast<int>(i))];
      for (const auto& [mono, c] : h.terms()) {
        std::size_t k = 0;
        while (k < m_ && mono[m_ + k] == 0) ++k;
        if (k == m_ || mono.degree() != 2 || mono[k] != 1 || !c.is_real() || c.real().get_den() != 1)
          throw std::logic_error("FlagModel: Cartan field is not diagonal in the coordinates");
        lambda_[i][k] = static_cast<int>(c.real().get_num().get_si());
      }
    }
    roots_.assign(lie_.dim(), Weight(r, 0));
    for (std::size_t a = 0; a < lie_.dim(); ++a)
      for (std::size_t i = 0; i < r; ++i) {
        const SparseVector& br = lie_.bracket_basis(lie_.h_index(static_cast<int>(i)), a);
        const Scalar c = br[a];
        roots_[a][i] = static_cast<int>(c.real().get_num().get_si());
      }
  }

 public:
  /// eta = xi + (1/2) div(xi) for a first-order operator without constant term.
  static WeylOperator half_density_twist(const WeylOperator& xi) {
    if (xi.order() > 1 || !xi.constant_term().is_zero() || !xi.order_part(0).is_zero())
      throw OrderError("half_density_twist: expected a vector field");
    const std::size_t m = xi.nvars();
    PolyZ div(m);
    for (std::size_t k = 0; k < m; ++k) div += xi.coefficient_of(Monomial::variable(m, k)).derivative(k);
    return xi + WeylOperator::multiplication(Scalar::ratio(1, 2) * div);
  }

 private:
  FlagConfig config_;
  LieAlgebra lie_;
  std::vector<std::pair<int, int>> positions_;
  std::size_t m_ = 0;
  std::vector<WeylOperator> xi_, eta_;
  std::vector<PolyZP> mu_;
  std::vector<std::vector<int>> lambda_;
  std::vector<Weight> roots_;
};

}  // namespace flagstar
