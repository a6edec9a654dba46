#pragma once

#include <optional>
#include <string>
#include <vector>

#include "flagstar/monomial.hpp"
#include "flagstar/scalar.hpp"

namespace flagstar {

/// Dense row-major matrix over Q(i).
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t k = 0; k < n; ++k) m(k, k) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Scalar& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Scalar& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::vector<Scalar> row(std::size_t r) const {
    return {data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
            data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_)};
  }
  std::vector<Scalar> column(std::size_t c) const {
    std::vector<Scalar> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
  }
  void set_column(std::size_t c, const std::vector<Scalar>& v) {
    for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = v[r];
  }

  bool is_zero() const {
    for (const auto& s : data_)
      if (!s.is_zero()) return false;
    return true;
  }

  Matrix conj_transpose() const {
    Matrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c).conj();
    return out;
  }

  /// Entrywise complex conjugate.
  Matrix conj() const {
    Matrix out(*this);
    for (auto& s : out.data_) s = s.conj();
    return out;
  }

  Matrix transpose() const {
    Matrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
    return out;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw DimensionError("Matrix: product shape mismatch");
    Matrix out(a.rows_, b.cols_);
    for (std::size_t r = 0; r < a.rows_; ++r)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Scalar& x = a(r, k);
        if (x.is_zero()) continue;
        for (std::size_t c = 0; c < b.cols_; ++c)
          if (!b(k, c).is_zero()) out(r, c) += x * b(k, c);
      }
    return out;
  }

  friend std::vector<Scalar> operator*(const Matrix& a, const std::vector<Scalar>& v) {
    if (a.cols_ != v.size()) throw DimensionError("Matrix: vector shape mismatch");
    std::vector<Scalar> out(a.rows_);
    for (std::size_t r = 0; r < a.rows_; ++r)
      for (std::size_t k = 0; k < a.cols_; ++k)
        if (!a(r, k).is_zero() && !v[k].is_zero()) out[r] += a(r, k) * v[k];
    return out;
  }

  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionError("Matrix: difference shape mismatch");
    Matrix out = a;
    for (std::size_t k = 0; k < out.data_.size(); ++k) out.data_[k] -= b.data_[k];
    return out;
  }
  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionError("Matrix: sum shape mismatch");
    Matrix out = a;
    for (std::size_t k = 0; k < out.data_.size(); ++k) out.data_[k] += b.data_[k];
    return out;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> data_;
};

/// In-place reduced row echelon form; returns the pivot columns.
inline std::vector<std::size_t> rref(Matrix& a) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t p = r;
    while (p < a.rows() && a(p, c).is_zero()) ++p;
    if (p == a.rows()) continue;
    if (p != r)
      for (std::size_t k = 0; k < a.cols(); ++k) std::swap(a(p, k), a(r, k));
    const Scalar inv = Scalar(1) / a(r, c);
    for (std::size_t k = c; k < a.cols(); ++k) a(r, k) *= inv;
    for (std::size_t q = 0; q < a.rows(); ++q) {
      if (q == r || a(q, c).is_zero()) continue;
      const Scalar f = a(q, c);
      for (std::size_t k = c; k < a.cols(); ++k)
        if (!a(r, k).is_zero()) a(q, k) -= f * a(r, k);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline std::size_t rank(Matrix a) { return rref(a).size(); }

/// Basis of {x : a x = 0}, one vector per free column.
inline std::vector<std::vector<Scalar>> nullspace(Matrix a) {
  const auto pivots = rref(a);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<std::vector<Scalar>> out;
  for (std::size_t f = 0; f < a.cols(); ++f) {
    if (is_pivot[f]) continue;
    std::vector<Scalar> v(a.cols());
    v[f] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -a(r, f);
    out.push_back(std::move(v));
  }
  return out;
}

/// Some solution of a x = b, or nullopt when inconsistent.
inline std::optional<std::vector<Scalar>> solve(const Matrix& a, const std::vector<Scalar>& b) {
  if (b.size() != a.rows()) throw DimensionError("solve: right-hand side length mismatch");
  Matrix aug(a.rows(), a.cols() + 1);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) aug(r, c) = a(r, c);
    aug(r, a.cols()) = b[r];
  }
  const auto pivots = rref(aug);
  if (!pivots.empty() && pivots.back() == a.cols()) return std::nullopt;
  std::vector<Scalar> x(a.cols());
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug(r, a.cols());
  return x;
}

/// Solves a X = b for a square invertible a; throws if singular.
inline Matrix solve_square(const Matrix& a, const Matrix& b) {
  if (a.rows() != a.cols() || b.rows() != a.rows()) throw DimensionError("solve_square: shape mismatch");
  const std::size_t n = a.rows();
  Matrix aug(n, n + b.cols());
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) aug(r, c) = a(r, c);
    for (std::size_t c = 0; c < b.cols(); ++c) aug(r, n + c) = b(r, c);
  }
  const auto pivots = rref(aug);
  if (pivots.size() < n || pivots[n - 1] != n - 1) throw std::domain_error("solve_square: singular matrix");
  Matrix x(n, b.cols());
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < b.cols(); ++c) x(r, c) = aug(r, n + c);
  return x;
}

inline Matrix inverse(const Matrix& a) { return solve_square(a, Matrix::identity(a.rows())); }

/// Diagonal of the LDL* factorization of a hermitian matrix, without pivoting.
///
/// The matrix is positive definite iff every returned pivot is a positive
/// rational. Elimination stops at the first zero pivot, so a short result
/// means a singular leading minor.
inline std::vector<Scalar> ldl_pivots(Matrix a) {
  const std::size_t n = a.rows();
  std::vector<Scalar> d;
  for (std::size_t k = 0; k < n; ++k) {
    const Scalar piv = a(k, k);
    d.push_back(piv);
    if (piv.is_zero()) break;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a(i, k).is_zero()) continue;
      const Scalar f = a(i, k) / piv;
      for (std::size_t j = k + 1; j < n; ++j)
        if (!a(k, j).is_zero()) a(i, j) -= f * a(k, j);
    }
  }
  return d;
}

inline bool is_positive_rational(const Scalar& s) { return s.is_real() && sgn(s.real()) > 0; }

inline bool is_hermitian(const Matrix& a) { return a.rows() == a.cols() && a == a.conj_transpose(); }

inline Scalar dot(const std::vector<Scalar>& a, const std::vector<Scalar>& b) {
  Scalar s;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (!a[k].is_zero() && !b[k].is_zero()) s += a[k] * b[k];
  return s;
}

inline bool is_zero_vector(const std::vector<Scalar>& v) {
  for (const auto& s : v)
    if (!s.is_zero()) return false;
  return true;
}

}  // namespace flagstar
