#pragma once

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>

#include "flagstar/flag_model.hpp"

namespace flagstar {

class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parses expressions such as "E12*E21 - 1/2*H1 + 3" into S(g).
///
/// Grammar: expr = term {('+'|'-') term}; term = factor {'*' factor};
/// factor = '-' factor | number | name | '(' expr ')'. Names are basis
/// elements E_ij and H_i, with or without underscores; numbers are integers
/// or fractions p/q.
class ExpressionParser {
 public:
  ExpressionParser(const LieAlgebra& g, std::string_view text) : g_(&g), text_(text) {}

  SymElement parse() {
    SymElement out = expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("expression: " + what + " at column " + std::to_string(pos_ + 1));
  }
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  SymElement expr() {
    SymElement out = term();
    while (true) {
      if (accept('+')) out += term();
      else if (accept('-')) out -= term();
      else return out;
    }
  }
  SymElement term() {
    SymElement out = factor();
    while (accept('*')) out = out * factor();
    return out;
  }
  SymElement factor() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    if (accept('-')) return -factor();
    if (accept('(')) {
      SymElement inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return name();
    fail("unexpected '" + std::string(1, c) + "'");
  }
  SymElement number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '/') {
      ++pos_;
      const std::size_t den = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (pos_ == den) fail("missing denominator");
    }
    const std::string_view lit = text_.substr(start, pos_ - start);
    try {
      return SymElement::constant(g_->dim(), Scalar(detail::parse_rational(lit)));
    } catch (const std::exception&) {
      fail("bad number '" + std::string(lit) + "'");
    }
  }
  SymElement name() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string id(text_.substr(start, pos_ - start));
    const auto a = g_->find(id);
    if (!a) {
      pos_ = start;
      fail("unknown basis element '" + id + "' for " + "sl" + std::to_string(g_->rank() + 1));
    }
    return SymElement::variable(g_->dim(), *a);
  }

  const LieAlgebra* g_;
  std::string_view text_;
  std::size_t pos_ = 0;
};

inline SymElement parse_expression(const LieAlgebra& g, std::string_view text) { return ExpressionParser(g, text).parse(); }

/// A parsed mu-polynomial in R together with its degree; inhomogeneous input is rejected.
struct HomogeneousElement {
  PolyZP value;
  int degree = 0;
};

inline HomogeneousElement parse_homogeneous(const FlagModel& model, std::string_view text) {
  const PolyZP value = model.substitute(parse_expression(model.lie(), text));
  const auto parts = p_degree_split(value);
  if (parts.size() > 1) throw ParseError("expression '" + std::string(text) + "' is not homogeneous");
  return {value, parts.empty() ? 0 : parts.front().first};
}

}  // namespace flagstar
