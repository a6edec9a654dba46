#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "flagstar/trace.hpp"

using namespace flagstar;

namespace {

struct Setup {
  FlagModel model;
  ClassicalSide cs;
  DModuleSide dm;
  TraceFunctional trace;
  Setup(FlagConfig cfg, int basis_level, int trace_level)
      : model(std::move(cfg)), cs(model, trace_level), dm(cs, basis_level), trace(dm, trace_level) {}
};

WeylOperator random_member(std::mt19937& rng, const DModuleSide& dm, int d, bool complex) {
  std::uniform_int_distribution<long> c(-3, 3);
  std::vector<Scalar> coords(dm.dim(d));
  for (auto& s : coords) {
    s = Scalar(c(rng));
    if (complex) s += Scalar(c(rng)) * Scalar::i();
  }
  return dm.element(coords);
}

}  // namespace

TEST_CASE("sl2 trace values") {
  const Setup s(FlagConfig::projective(2), 2, 4);
  const LieAlgebra& g = s.model.lie();
  const std::size_t e = g.e_index(0, 1), f = g.e_index(1, 0), h = g.h_index(0);
  CHECK(s.trace(WeylOperator::identity(1)) == Scalar(1));
  for (std::size_t a = 0; a < g.dim(); ++a) CHECK(s.trace(s.model.eta(a)).is_zero());
  const Scalar tef = s.trace(s.model.eta(e) * s.model.eta(f));
  const Scalar thh = s.trace(s.model.eta(h) * s.model.eta(h));
  CHECK(tef == Scalar::ratio(-1, 6));
  CHECK(thh == Scalar::ratio(-1, 3));
  // casimir oracle: 2 T(eta^e eta^f) + 1/2 T(eta^h eta^h) = -1/2 up to the [e,f] ordering term,
  // since ef + fe + h^2/2 acts as -1/2 and T(fe) = T(ef)
  CHECK(Scalar(2) * tef + Scalar::ratio(1, 2) * thh == Scalar::ratio(-1, 2));
  // T(eta^x eta^y) proportional to tr(xy)
  for (std::size_t a = 0; a < g.dim(); ++a)
    for (std::size_t b = 0; b < g.dim(); ++b)
      CHECK(s.trace(s.model.eta(a) * s.model.eta(b)) == Scalar::ratio(-1, 6) * g.trace_form(g.unit(a), g.unit(b)));
}

TEST_CASE("trace vanishes on commutators and is a trace") {
  for (const auto& cfg : {FlagConfig::projective(2), FlagConfig::projective(3), FlagConfig::full(3)}) {
    const Setup s(cfg, 2, 4);
    INFO(cfg.label());
    for (std::size_t j = 0; j < s.dm.dim(2); ++j)
      for (std::size_t a = 0; a < s.model.dim_g(); ++a) CHECK(s.trace(s.dm.ad(a, s.dm.basis(j))).is_zero());
    std::mt19937 rng(3);
    for (int k = 0; k < 8; ++k) {
      const WeylOperator a = random_member(rng, s.dm, 2, true), b = random_member(rng, s.dm, 2, true);
      const Scalar tab = s.trace(a * b);
      CHECK(tab == s.trace(b * a));
      CHECK(s.trace.pair(a, b) == tab);
      CHECK(s.trace(a.transpose()) == s.trace(a));
      CHECK(s.trace(a.bar()) == s.trace(a).conj());
    }
  }
}

TEST_CASE("trace does not depend on the level it is computed to") {
  const Setup lo(FlagConfig::projective(3), 2, 2);
  const Setup hi(FlagConfig::projective(3), 2, 4);
  for (std::size_t j = 0; j < lo.dm.dim(2); ++j) CHECK(lo.trace(lo.dm.basis(j)) == hi.trace(hi.dm.basis(j)));
}

TEST_CASE("trace annihilates nonzero weights") {
  const Setup s(FlagConfig::full(3), 3, 3);
  for (std::size_t j = 0; j < s.dm.dim(3); ++j)
    if (s.dm.weight_of(j) != s.model.zero_weight()) CHECK(s.trace(s.dm.basis(j)).is_zero());
}

TEST_CASE("trace order guard") {
  const Setup s(FlagConfig::projective(2), 2, 2);
  const WeylOperator e = s.model.eta(0);
  CHECK_THROWS_AS(s.trace(e * e * e), OrderError);
  CHECK_THROWS_AS(s.trace.pair(e * e, e), OrderError);
}
