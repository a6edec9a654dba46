#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "flagstar/parallel.hpp"
#include "flagstar/trace.hpp"

namespace flagstar {

/// Basis elements of D_{<=D} sharing one weight, with their Gram data.
///
/// gamma(L_i, L_j) = T(L_i sigma(L_j)) vanishes between different weights, so
/// every computation here is block diagonal.
struct GramBlock {
  Weight weight;
  std::vector<std::size_t> members;  // global indices, ascending, hence by level
  std::vector<int> levels;
  Matrix gamma;                      // gamma(L_i, L_j) over members
  Matrix split;                      // row r: coordinates of bq(mu^{M_r}) over members
  std::vector<Scalar> pivots;        // LDL* diagonal of gamma in member order
};

/// The preferred quantization map and everything derived from it, up to degree D.
///
/// V^d is the gamma-orthogonal complement of D_{<=d-1} in D_{<=d}; bq sends
/// mu^M to the unique element of V^d with principal symbol mu^M. The inner
/// product <phi|psi> on R is gamma(bq(phi), bq(psi)).
class Quantization {
 public:
  Quantization(const DModuleSide& dm, const TraceFunctional& trace, unsigned jobs = 1)
      : dm_(&dm), trace_(&trace), degree_(dm.max_level()), jobs_(jobs) {
    if (trace.max_level() < 2 * degree_) throw DimensionError("Quantization: trace must reach twice the degree");
    const std::size_t n = dm.dim(degree_);
    std::map<Weight, std::size_t> block_of;
    position_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      const Weight w = dm.weight_of(j);
      auto [it, inserted] = block_of.try_emplace(w, blocks_.size());
      if (inserted) blocks_.push_back(GramBlock{w, {}, {}, {}, {}, {}});
      GramBlock& b = blocks_[it->second];
      position_[j] = {it->second, b.members.size()};
      b.members.push_back(j);
      b.levels.push_back(dm.level_of(j));
    }
    build_gamma();
    for (auto& b : blocks_) {
      b.pivots = ldl_pivots(b.gamma);
      build_split(b);
    }
    vops_.resize(n, WeylOperator(dm.model().m()));
    parallel_for(n, jobs_, [&](std::size_t j) {
      const auto [bi, r] = position_[j];
      const GramBlock& b = blocks_[bi];
      WeylOperator op(dm.model().m());
      for (std::size_t c = 0; c < b.members.size(); ++c)
        if (!b.split(r, c).is_zero()) op = op.axpy(b.split(r, c), dm.basis(b.members[c]));
      vops_[j] = std::move(op);
    });
    for (int d = 0; d <= degree_; ++d) grams_.push_back(build_inner_gram(d));
  }

  const DModuleSide& dmodule() const { return *dm_; }
  const ClassicalSide& classical() const { return dm_->classical(); }
  const FlagModel& model() const { return dm_->model(); }
  const TraceFunctional& trace() const { return *trace_; }
  int degree() const { return degree_; }
  unsigned jobs() const { return jobs_; }
  const std::vector<GramBlock>& blocks() const { return blocks_; }

  /// gamma(A, B) = T(A sigma(B)) for A, B in D_{<=degree}.
  Scalar gamma(const WeylOperator& a, const WeylOperator& b) const {
    return trace_->pair(a, dm_->sigma(b, std::max(0, b.order())));
  }

  /// bq of the k-th basis element of R^d.
  const WeylOperator& bq_basis(int d, std::size_t k) const { return vops_.at(dm_->offset(d) + k); }
  const WeylOperator& bq_global(std::size_t j) const { return vops_.at(j); }

  WeylOperator bq(const PolyZP& phi, int d) const {
    const auto c = classical().coordinates(phi, d);
    WeylOperator out(model().m());
    for (std::size_t k = 0; k < c.size(); ++k)
      if (!c[k].is_zero()) out = out.axpy(c[k], bq_basis(d, k));
    return out;
  }

  /// Components phi_k in R^k with A = sum bq(phi_k), index k; empty for A = 0.
  std::vector<PolyZP> bq_inverse(WeylOperator a) const {
    const int top = a.order();
    if (top > degree_) throw OrderError("bq_inverse: operator order exceeds the quantized degree");
    std::vector<PolyZP> out(static_cast<std::size_t>(std::max(top + 1, 0)), PolyZP(2 * model().m()));
    for (int k = top; k >= 0; --k) {
      PolyZP sym = a.symbol(k);
      if (sym.is_zero()) continue;
      const auto c = classical().coordinates(sym, k);
      for (std::size_t j = 0; j < c.size(); ++j)
        if (!c[j].is_zero()) a = a.axpy(-c[j], bq_basis(k, j));
      out[static_cast<std::size_t>(k)] = std::move(sym);
    }
    if (!a.is_zero()) throw ConsistencyError("eq:bqsm_list", "bq_inverse left a remainder");
    return out;
  }

  /// C_p(phi, psi) for p = 0..j+k, from bq(phi) bq(psi).
  std::vector<PolyZP> star(const PolyZP& phi, int j, const PolyZP& psi, int k) const {
    if (j + k > degree_) throw DimensionError("star: total degree exceeds the quantized degree");
    const auto comps = bq_inverse(bq(phi, j) * bq(psi, k));
    std::vector<PolyZP> out;
    for (int p = 0; p <= j + k; ++p) {
      const std::size_t idx = static_cast<std::size_t>(j + k - p);
      out.push_back(idx < comps.size() ? comps[idx] : PolyZP(2 * model().m()));
    }
    return out;
  }

  /// <e_M|e_N> on the basis of R^d.
  const Matrix& inner_gram(int d) const { return grams_.at(static_cast<std::size_t>(d)); }

  /// <phi|psi> for phi, psi in R^d (sesquilinear, anti-linear in psi).
  Scalar inner(const PolyZP& phi, const PolyZP& psi, int d) const {
    const auto a = classical().coordinates(phi, d), b = classical().coordinates(psi, d);
    const Matrix& g = inner_gram(d);
    Scalar s;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i].is_zero()) continue;
      for (std::size_t j = 0; j < b.size(); ++j)
        if (!b[j].is_zero() && !g(i, j).is_zero()) s += a[i] * b[j].conj() * g(i, j);
    }
    return s;
  }

  /// <phi|psi> = T(bq(phi) bq(psi^sigma)) evaluated directly for any pair of degrees.
  Scalar inner_direct(const PolyZP& phi, int j, const PolyZP& psi, int k) const {
    return trace_->pair(bq(phi, j), bq(classical().sigma(psi, k), k));
  }

  /// Matrix of multiplication by mu^x from R^{d-1} to R^d.
  Matrix multiplication_matrix(const std::vector<Scalar>& x, int d) const {
    const ClassicalSide& cs = classical();
    const PolyZP mx = model().mu(x);
    Matrix out(cs.dim(d), cs.dim(d - 1));
    for (std::size_t k = 0; k < cs.dim(d - 1); ++k) out.set_column(k, cs.coordinates(mx * cs.basis(d - 1, k), d));
    return out;
  }

  /// Lambda^x: R^d -> R^{d-1}, the adjoint of multiplication by mu^{sigma(x)}.
  /// Lambda^x is linear in x, so it is assembled from cached basis matrices.
  Matrix lambda(const std::vector<Scalar>& x, int d) const {
    if (d == 0) return Matrix(0, 1);
    Matrix out(classical().dim(d - 1), classical().dim(d));
    for (std::size_t a = 0; a < x.size(); ++a) {
      if (x[a].is_zero()) continue;
      const Matrix& la = lambda_basis(a, d);
      for (std::size_t r = 0; r < out.rows(); ++r)
        for (std::size_t c = 0; c < out.cols(); ++c)
          if (!la(r, c).is_zero()) out(r, c) += x[a] * la(r, c);
    }
    return out;
  }

  /// Lambda of the a-th basis element on R^d, solved once.
  const Matrix& lambda_basis(std::size_t a, int d) const {
    std::lock_guard<std::mutex> lock(lambda_mutex_);
    auto it = lambdas_.find({a, d});
    if (it != lambdas_.end()) return it->second;
    const Matrix ms = multiplication_matrix(model().lie().cartan_involution(model().lie().unit(a)), d);
    // G_{d-1}^T Lambda = (G_d conj(ms))^T
    Matrix m = solve_square(inner_gram(d - 1).transpose(), (inner_gram(d) * ms.conj()).transpose());
    return lambdas_.emplace(std::pair{a, d}, std::move(m)).first->second;
  }

  PolyZP lambda_apply(const std::vector<Scalar>& x, const PolyZP& phi, int d) const {
    if (d == 0) return PolyZP(2 * model().m());
    return classical().element(d - 1, lambda(x, d) * classical().coordinates(phi, d));
  }

  /// Harmonic symmetrization: lift phi to H^d, then average eta-words over orderings.
  WeylOperator bfr(const PolyZP& phi, int d) const {
    const IdealData& id = ideal(d);
    return model().symmetrized(harmonic_lift(classical(), id, phi));
  }

  const IdealData& ideal(int d) const {
    std::lock_guard<std::mutex> lock(ideal_mutex_);
    auto it = ideals_.find(d);
    if (it == ideals_.end()) it = ideals_.emplace(d, ideal_and_harmonics(classical(), d)).first;
    return it->second;
  }

  bool positive_definite() const {
    for (const auto& b : blocks_) {
      if (b.pivots.size() != b.members.size()) return false;
      for (const auto& p : b.pivots)
        if (!is_positive_rational(p)) return false;
    }
    return true;
  }

 private:
  void build_gamma() {
    struct Task {
      std::size_t block, row, col;
    };
    std::vector<Task> tasks;
    for (std::size_t bi = 0; bi < blocks_.size(); ++bi) {
      blocks_[bi].gamma = Matrix(blocks_[bi].members.size(), blocks_[bi].members.size());
      for (std::size_t r = 0; r < blocks_[bi].members.size(); ++r)
        for (std::size_t c = 0; c < blocks_[bi].members.size(); ++c) tasks.push_back({bi, r, c});
    }
    const std::size_t n = dm_->dim(degree_);
    std::vector<WeylOperator> sig(n);
    parallel_for(n, jobs_, [&](std::size_t j) { sig[j] = dm_->sigma_lift(dm_->set_of(j)); });
    std::vector<Scalar> values(tasks.size());
    parallel_for(tasks.size(), jobs_, [&](std::size_t t) {
      const GramBlock& b = blocks_[tasks[t].block];
      values[t] = trace_->pair(dm_->basis(b.members[tasks[t].row]), sig[b.members[tasks[t].col]]);
    });
    for (std::size_t t = 0; t < tasks.size(); ++t) blocks_[tasks[t].block].gamma(tasks[t].row, tasks[t].col) = values[t];
  }

  static void build_split(GramBlock& b) {
    const std::size_t n = b.members.size();
    b.split = Matrix::identity(n);
    std::size_t start = 0;
    while (start < n) {
      std::size_t end = start;
      while (end < n && b.levels[end] == b.levels[start]) ++end;
      if (start > 0) {
        // gamma(L_i - sum c_N L_N, L_K) = 0 for all lower K: G_low^T c = gamma(L_i, L_K)
        Matrix low(start, start), rhs(start, end - start);
        for (std::size_t r = 0; r < start; ++r)
          for (std::size_t c = 0; c < start; ++c) low(r, c) = b.gamma(c, r);
        for (std::size_t i = start; i < end; ++i)
          for (std::size_t k = 0; k < start; ++k) rhs(k, i - start) = b.gamma(i, k);
        const Matrix coef = solve_square(low, rhs);
        for (std::size_t i = start; i < end; ++i)
          for (std::size_t k = 0; k < start; ++k) b.split(i, k) = -coef(k, i - start);
      }
      start = end;
    }
  }

  Matrix build_inner_gram(int d) const {
    const std::size_t dim = classical().dim(d), off = dm_->offset(d);
    Matrix g(dim, dim);
    for (const auto& b : blocks_) {
      std::vector<std::size_t> rows;
      for (std::size_t r = 0; r < b.members.size(); ++r)
        if (b.levels[r] == d) rows.push_back(r);
      for (std::size_t r1 : rows)
        for (std::size_t r2 : rows) {
          Scalar s;
          for (std::size_t k = 0; k <= r1; ++k) {
            if (b.split(r1, k).is_zero()) continue;
            for (std::size_t j = 0; j <= r2; ++j)
              if (!b.split(r2, j).is_zero() && !b.gamma(k, j).is_zero())
                s += b.split(r1, k) * b.split(r2, j).conj() * b.gamma(k, j);
          }
          g(b.members[r1] - off, b.members[r2] - off) = s;
        }
    }
    return g;
  }

  const DModuleSide* dm_;
  const TraceFunctional* trace_;
  int degree_;
  unsigned jobs_;
  std::vector<GramBlock> blocks_;
  std::vector<std::pair<std::size_t, std::size_t>> position_;
  std::vector<WeylOperator> vops_;
  std::vector<Matrix> grams_;
  mutable std::map<int, IdealData> ideals_;
  mutable std::mutex ideal_mutex_;
  mutable std::map<std::pair<std::size_t, int>, Matrix> lambdas_;
  mutable std::mutex lambda_mutex_;
};

}  // namespace flagstar
