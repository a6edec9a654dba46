#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace flagstar {

/// Exact element a + b*i of the Gaussian rationals Q(i).
///
/// Both parts are GMP rationals kept in canonical (gcd-reduced) form, so two
/// values are equal iff their parts are equal. Operations take a fast path when
/// both operands are real, which is the common case in the pipeline.
class GaussianRational {
 public:
  GaussianRational() = default;
  GaussianRational(int v) : re_(v) {}  // NOLINT(google-explicit-constructor)
  GaussianRational(long v) : re_(v) {}  // NOLINT(google-explicit-constructor)
  GaussianRational(mpq_class re) : re_(std::move(re)) {}  // NOLINT
  GaussianRational(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {}

  static GaussianRational i() { return {mpq_class(0), mpq_class(1)}; }

  /// Rational p/q; q must be nonzero.
  static GaussianRational ratio(long p, long q) {
    if (q == 0) throw std::domain_error("GaussianRational: zero denominator");
    mpq_class r(p, q);
    r.canonicalize();
    return {r};
  }

  /// Parses the canonical text form produced by to_string():
  /// "a", "a/b", "c/d*i", "a/b+c/d*i", "a/b-c/d*i".
  static GaussianRational parse(std::string_view text);

  const mpq_class& real() const { return re_; }
  const mpq_class& imag() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }
  bool is_one() const { return is_real() && re_ == 1; }

  GaussianRational conj() const {
    if (is_real()) return *this;
    return {re_, -im_};
  }

  /// |z|^2 = a^2 + b^2.
  mpq_class norm() const { return re_ * re_ + im_ * im_; }

  GaussianRational operator-() const { return {-re_, -im_}; }

  GaussianRational& operator+=(const GaussianRational& o) {
    re_ += o.re_;
    if (!o.is_real()) im_ += o.im_;
    return *this;
  }
  GaussianRational& operator-=(const GaussianRational& o) {
    re_ -= o.re_;
    if (!o.is_real()) im_ -= o.im_;
    return *this;
  }
  GaussianRational& operator*=(const GaussianRational& o) {
    if (o.is_real()) {
      re_ *= o.re_;
      if (!is_real()) im_ *= o.re_;
      return *this;
    }
    if (is_real()) {
      im_ = re_ * o.im_;
      re_ *= o.re_;
      return *this;
    }
    mpq_class re = re_ * o.re_ - im_ * o.im_;
    mpq_class im = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
  }
  GaussianRational& operator/=(const GaussianRational& o) {
    if (o.is_zero()) throw std::domain_error("GaussianRational: division by zero");
    if (o.is_real()) {
      re_ /= o.re_;
      if (!is_real()) im_ /= o.re_;
      return *this;
    }
    const mpq_class n = o.norm();
    *this *= o.conj();
    re_ /= n;
    im_ /= n;
    return *this;
  }

  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }

  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

  /// Canonical text: real part and/or imaginary part, denominators omitted when 1.
  std::string to_string() const {
    if (is_real()) return re_.get_str();
    std::string im = im_.get_str() + "*i";
    if (sgn(re_) == 0) return im;
    std::string out = re_.get_str();
    if (sgn(im_) > 0) out += '+';
    return out + im;
  }

  friend std::ostream& operator<<(std::ostream& os, const GaussianRational& z) { return os << z.to_string(); }

  std::size_t hash() const {
    std::size_t h = std::hash<std::string>{}(re_.get_str());
    if (!is_real()) h ^= std::hash<std::string>{}(im_.get_str()) * 0x9e3779b97f4a7c15ULL;
    return h;
  }

 private:
  mpq_class re_{0};
  mpq_class im_{0};
};

using Scalar = GaussianRational;

namespace detail {

inline mpq_class parse_rational(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  std::string s(text);
  if (s.front() == '+') s.erase(0, 1);
  for (char c : s) {
    if (!(c == '-' || c == '/' || (c >= '0' && c <= '9'))) {
      throw std::invalid_argument("malformed rational literal: " + std::string(text));
    }
  }
  mpq_class r;
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("malformed rational literal: " + std::string(text));
  if (r.get_den() == 0) throw std::domain_error("zero denominator in literal: " + std::string(text));
  r.canonicalize();
  return r;
}

}  // namespace detail

inline GaussianRational GaussianRational::parse(std::string_view text) {
  if (text.size() >= 2 && text.substr(text.size() - 2) == "*i") {
    std::string_view body = text.substr(0, text.size() - 2);
    // split at the last sign that is not the leading one
    std::size_t split = std::string_view::npos;
    for (std::size_t k = body.size(); k-- > 1;) {
      if (body[k] == '+' || body[k] == '-') {
        split = k;
        break;
      }
    }
    if (split == std::string_view::npos) return {mpq_class(0), detail::parse_rational(body)};
    return {detail::parse_rational(body.substr(0, split)), detail::parse_rational(body.substr(split))};
  }
  return {detail::parse_rational(text)};
}

}  // namespace flagstar

template <>
struct std::hash<flagstar::GaussianRational> {
  std::size_t operator()(const flagstar::GaussianRational& z) const { return z.hash(); }
};
