#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "flagstar/polynomial.hpp"

using namespace flagstar;

namespace {

Scalar random_scalar(std::mt19937& rng, bool complex = true) {
  std::uniform_int_distribution<long> num(-9, 9), den(1, 5);
  Scalar re = Scalar::ratio(num(rng), den(rng));
  if (!complex) return re;
  return re + Scalar::ratio(num(rng), den(rng)) * Scalar::i();
}

PolyZP random_poly(std::mt19937& rng, std::size_t nvars, int terms, int max_exp) {
  std::uniform_int_distribution<int> e(0, max_exp);
  PolyZP out(nvars);
  for (int t = 0; t < terms; ++t) {
    Monomial m(nvars);
    for (std::size_t k = 0; k < nvars; ++k) m.set(k, e(rng));
    out += PolyZP::monomial(m, random_scalar(rng));
  }
  return out;
}

}  // namespace

TEST_CASE("gaussian rationals stay reduced and exact") {
  const Scalar a = Scalar::ratio(6, 8);
  CHECK(a.real() == mpq_class(3, 4));
  CHECK(a.to_string() == "3/4");
  CHECK((Scalar::i() * Scalar::i()) == Scalar(-1));
  const Scalar z(mpq_class(1, 2), mpq_class(-3, 7));
  CHECK(z.to_string() == "1/2-3/7*i");
  CHECK(Scalar::parse(z.to_string()) == z);
  CHECK(Scalar::parse("-5/3*i") == Scalar(mpq_class(0), mpq_class(-5, 3)));
  CHECK((z / z) == Scalar(1));
  CHECK_THROWS_AS(z / Scalar(0), std::domain_error);
  CHECK_THROWS(Scalar::parse("1.5"));
}

TEST_CASE("conjugation is a field involution") {
  std::mt19937 rng(7);
  for (int k = 0; k < 200; ++k) {
    const Scalar x = random_scalar(rng), y = random_scalar(rng);
    CHECK(x.conj().conj() == x);
    CHECK((x * y).conj() == x.conj() * y.conj());
    CHECK((x + y).conj() == x.conj() + y.conj());
    CHECK(((x * y) * x) == (x * (y * x)));
    CHECK((x * (x + y)) == (x * x + x * y));
  }
}

TEST_CASE("poly_arith examples") {
  const std::size_t n = 2;  // z1, p1
  const PolyZP z1 = PolyZP::variable(n, 0), p1 = PolyZP::variable(n, 1);
  CHECK((z1 + p1) + (-z1) == p1);
  CHECK((z1 * p1) * (z1 * p1) == PolyZP::monomial(Monomial{2, 2}));
  const PolyZP ip = Scalar::i() * p1;
  CHECK(ip * ip == -(p1 * p1));
  CHECK((ip * ip).to_string() == "-p1^2");
  CHECK_THROWS_AS(z1 + PolyZP::variable(4, 0), DimensionError);
}

TEST_CASE("canonical text orders terms by descending graded-lex") {
  const std::size_t n = 4;  // z1 z2 p1 p2
  const PolyZP f = PolyZP::variable(n, 0) * PolyZP::variable(n, 2) + PolyZP::variable(n, 3).pow(2) +
                   Scalar::ratio(-1, 2) * PolyZP::constant(n, 1) +
                   Scalar(mpq_class(2), mpq_class(1, 3)) * PolyZP::variable(n, 1);
  CHECK(f.to_string() == "z1*p1 + p2^2 + (2+1/3*i)*z2 - 1/2");
  CHECK(PolyZP(n).to_string() == "0");
}

TEST_CASE("ring axioms on random polynomials") {
  std::mt19937 rng(11);
  for (int k = 0; k < 30; ++k) {
    const PolyZP a = random_poly(rng, 4, 4, 2), b = random_poly(rng, 4, 4, 2), c = random_poly(rng, 4, 3, 2);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a * b == b * a);
    CHECK(a - a == PolyZP(4));
    CHECK(a.conj().conj() == a);
  }
}

TEST_CASE("p_degree_split is a direct sum decomposition") {
  const std::size_t n = 4;
  const PolyZP f = PolyZP::variable(n, 0) * PolyZP::variable(n, 2) + PolyZP::variable(n, 3).pow(2);
  const auto parts = p_degree_split(f);
  REQUIRE(parts.size() == 2);
  CHECK(parts[0].first == 1);
  CHECK(parts[0].second == PolyZP::variable(n, 0) * PolyZP::variable(n, 2));
  CHECK(parts[1].first == 2);
  CHECK(parts[1].second == PolyZP::variable(n, 3).pow(2));
  CHECK(p_degree_split(PolyZP(n)).empty());

  std::mt19937 rng(3);
  for (int k = 0; k < 30; ++k) {
    const PolyZP a = random_poly(rng, 4, 6, 3);
    PolyZP sum(4);
    for (const auto& [d, part] : p_degree_split(a)) {
      for (const auto& [m, c] : part.terms()) CHECK(m.partial_degree(2, 4) == d);
      sum += part;
    }
    CHECK(sum == a);
  }
}

TEST_CASE("monomials reject capacity overflow") {
  CHECK_THROWS_AS(Monomial(Monomial::kCapacity + 1), DimensionError);
  Monomial m(2);
  CHECK_THROWS_AS(m.set(2, 1), DimensionError);
  CHECK(Monomial{1, 0} > Monomial{0, 1});
  CHECK(Monomial{0, 2} > Monomial{1, 0});
}
