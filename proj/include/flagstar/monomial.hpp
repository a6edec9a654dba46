#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace flagstar {

/// Error raised when operands live in spaces of different dimension.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Exponent vector of a monomial in a fixed number of variables.
///
/// Stored inline (no allocation). Ordering is graded lexicographic: total
/// degree first, then the first differing exponent decides, larger exponent in
/// an earlier variable being the larger monomial.
class Monomial {
 public:
  static constexpr std::size_t kCapacity = 24;

  Monomial() = default;
  explicit Monomial(std::size_t nvars) : nvars_(check_size(nvars)) {}
  Monomial(std::initializer_list<int> exps) : nvars_(check_size(exps.size())) {
    std::size_t k = 0;
    for (int e : exps) set(k++, e);
  }
  explicit Monomial(std::span<const int> exps) : nvars_(check_size(exps.size())) {
    for (std::size_t k = 0; k < exps.size(); ++k) set(k, exps[k]);
  }

  static Monomial variable(std::size_t nvars, std::size_t index, int power = 1) {
    Monomial m(nvars);
    m.set(index, power);
    return m;
  }

  std::size_t size() const { return nvars_; }
  int degree() const { return degree_; }
  int operator[](std::size_t k) const { return exps_[k]; }

  void set(std::size_t k, int e) {
    if (k >= nvars_) throw DimensionError("Monomial: variable index out of range");
    if (e < 0 || e > 255) throw std::overflow_error("Monomial: exponent out of range");
    degree_ += e - exps_[k];
    exps_[k] = static_cast<std::uint8_t>(e);
  }

  /// Sum of exponents over the index range [begin, end).
  int partial_degree(std::size_t begin, std::size_t end) const {
    int d = 0;
    for (std::size_t k = begin; k < end; ++k) d += exps_[k];
    return d;
  }

  bool divides(const Monomial& o) const {
    for (std::size_t k = 0; k < nvars_; ++k)
      if (exps_[k] > o.exps_[k]) return false;
    return true;
  }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    if (a.nvars_ != b.nvars_) throw DimensionError("Monomial: variable count mismatch");
    Monomial r(a.nvars_);
    for (std::size_t k = 0; k < a.nvars_; ++k) {
      const int e = a.exps_[k] + b.exps_[k];
      if (e > 255) throw std::overflow_error("Monomial: exponent overflow");
      r.exps_[k] = static_cast<std::uint8_t>(e);
    }
    r.degree_ = a.degree_ + b.degree_;
    return r;
  }

  /// a / b, requires b | a.
  friend Monomial operator/(const Monomial& a, const Monomial& b) {
    Monomial r(a.nvars_);
    for (std::size_t k = 0; k < a.nvars_; ++k) r.exps_[k] = static_cast<std::uint8_t>(a.exps_[k] - b.exps_[k]);
    r.degree_ = a.degree_ - b.degree_;
    return r;
  }

  /// Concatenation [a | b].
  static Monomial concat(const Monomial& a, const Monomial& b) {
    Monomial r(a.nvars_ + b.nvars_);
    std::copy_n(a.exps_.begin(), a.nvars_, r.exps_.begin());
    std::copy_n(b.exps_.begin(), b.nvars_, r.exps_.begin() + static_cast<std::ptrdiff_t>(a.nvars_));
    r.degree_ = a.degree_ + b.degree_;
    return r;
  }

  Monomial slice(std::size_t begin, std::size_t end) const {
    Monomial r(end - begin);
    std::copy(exps_.begin() + static_cast<std::ptrdiff_t>(begin), exps_.begin() + static_cast<std::ptrdiff_t>(end),
              r.exps_.begin());
    r.degree_ = partial_degree(begin, end);
    return r;
  }

  std::vector<int> exponents() const { return {exps_.begin(), exps_.begin() + static_cast<std::ptrdiff_t>(nvars_)}; }

  friend bool operator==(const Monomial& a, const Monomial& b) {
    return a.nvars_ == b.nvars_ && a.exps_ == b.exps_;
  }
  friend bool operator!=(const Monomial& a, const Monomial& b) { return !(a == b); }
  friend bool operator<(const Monomial& a, const Monomial& b) {
    if (a.degree_ != b.degree_) return a.degree_ < b.degree_;
    for (std::size_t k = 0; k < a.nvars_; ++k)
      if (a.exps_[k] != b.exps_[k]) return a.exps_[k] < b.exps_[k];
    return a.nvars_ < b.nvars_;
  }
  friend bool operator>(const Monomial& a, const Monomial& b) { return b < a; }

  std::size_t hash() const {
    // FNV-1a over the used exponents
    std::uint64_t h = 1469598103934665603ULL ^ nvars_;
    for (std::size_t k = 0; k < nvars_; ++k) {
      h ^= exps_[k];
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }

  /// Space-separated exponent list, used by cache files.
  std::string exponent_string() const {
    std::string s;
    for (std::size_t k = 0; k < nvars_; ++k) {
      if (k) s += ' ';
      s += std::to_string(exps_[k]);
    }
    return s;
  }

 private:
  static std::size_t check_size(std::size_t n) {
    if (n > kCapacity) throw DimensionError("Monomial: too many variables (capacity " + std::to_string(kCapacity) + ")");
    return n;
  }

  std::array<std::uint8_t, kCapacity> exps_{};
  std::size_t nvars_ = 0;
  int degree_ = 0;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

}  // namespace flagstar
