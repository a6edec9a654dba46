#include <catch2/catch_amalgamated.hpp>

#include "flagstar/flag_model.hpp"

using namespace flagstar;

namespace {

std::vector<FlagConfig> small_configs() {
  return {FlagConfig::projective(2), FlagConfig::projective(3), FlagConfig::full(3), FlagConfig{4, {2}},
          FlagConfig::projective(4)};
}

WeylOperator combination(const FlagModel& model, const SparseVector& coords, bool twisted) {
  WeylOperator out(model.m());
  for (const auto& [k, c] : coords) out = out.axpy(c, twisted ? model.eta(k) : model.xi(k));
  return out;
}

}  // namespace

TEST_CASE("sl2 projective line fields") {
  const FlagModel model(FlagConfig::projective(2));
  const LieAlgebra& g = model.lie();
  const std::size_t e = g.e_index(0, 1), f = g.e_index(1, 0), h = g.h_index(0);
  REQUIRE(model.m() == 1);
  CHECK(model.xi(e).to_string() == "d1");
  CHECK(model.xi(h).to_string() == "-2*z1*d1");
  CHECK(model.xi(f).to_string() == "-z1^2*d1");
  CHECK(model.eta(e).to_string() == "d1");
  CHECK(model.eta(h).to_string() == "-2*z1*d1 - 1");
  CHECK(model.eta(f).to_string() == "-z1^2*d1 - z1");
  CHECK(model.mu(e).to_string() == "p1");
  CHECK(model.mu(h).to_string() == "-2*z1*p1");
  CHECK(model.mu(f).to_string() == "-z1^2*p1");
  CHECK(commutator(model.xi(e), model.xi(f)) == model.xi(h));
  CHECK(model.root(e) == Weight{2});
  CHECK(model.root(f) == Weight{-2});
  CHECK(model.coordinate_weight(0) == Weight{-2});
}

TEST_CASE("manifold dimensions") {
  CHECK(FlagConfig::full(3).manifold_dim() == 3);
  CHECK(FlagConfig::projective(3).manifold_dim() == 2);
  CHECK(FlagConfig{4, {2}}.manifold_dim() == 4);
  CHECK(FlagConfig::full(4).manifold_dim() == 6);
  CHECK_THROWS(FlagConfig{3, {2, 1}}.validate());
  CHECK_THROWS(FlagConfig{3, {3}}.validate());
  CHECK_THROWS(FlagConfig{3, {}}.validate());
}

TEST_CASE("half-density twist") {
  const WeylOperator z = WeylOperator::z(1, 0), d = WeylOperator::d(1, 0);
  CHECK(FlagModel::half_density_twist(Scalar(-2) * (z * d)).to_string() == "-2*z1*d1 - 1");
  CHECK(FlagModel::half_density_twist(-(z * z * d)).to_string() == "-z1^2*d1 - z1");
  CHECK(FlagModel::half_density_twist(d) == d);
  CHECK_THROWS_AS(FlagModel::half_density_twist(d * d), OrderError);
  CHECK_THROWS_AS(FlagModel::half_density_twist(d + WeylOperator::identity(1)), OrderError);
}

TEST_CASE("model invariants on small flag manifolds") {
  for (const auto& cfg : small_configs()) {
    const FlagModel model(cfg);
    const LieAlgebra& g = model.lie();
    INFO(cfg.label());
    const int bound = static_cast<int>(cfg.dims.size()) + 1;
    for (std::size_t a = 0; a < g.dim(); ++a) {
      CHECK(model.eta(a).order() <= 1);
      CHECK(model.xi(a).constant_term().is_zero());
      CHECK(model.eta(a).coefficient_degree() <= bound);
      CHECK(model.eta(a).transpose() == -model.eta(a));
      CHECK(model.eta(a).symbol(1) == model.mu(a));
      CHECK(model.eta(a).bar() == model.eta(a));
      for (std::size_t b = 0; b < g.dim(); ++b) {
        const SparseVector& br = g.bracket_basis(a, b);
        CHECK(commutator(model.xi(a), model.xi(b)) == combination(model, br, false));
        CHECK(commutator(model.eta(a), model.eta(b)) == combination(model, br, true));
      }
    }
  }
}

TEST_CASE("coefficient degree on grassmannians and full flags") {
  // Grassmannians are quadratic; the full flag of C^3 needs cubic coefficients.
  auto max_degree = [](const FlagModel& model) {
    int d = 0;
    for (std::size_t a = 0; a < model.dim_g(); ++a) d = std::max(d, model.xi(a).coefficient_degree());
    return d;
  };
  CHECK(max_degree(FlagModel(FlagConfig::projective(3))) == 2);
  CHECK(max_degree(FlagModel(FlagConfig{4, {2}})) == 2);
  CHECK(max_degree(FlagModel(FlagConfig::full(3))) == 3);
}

TEST_CASE("weights are read off the Cartan fields") {
  for (const auto& cfg : small_configs()) {
    const FlagModel model(cfg);
    for (std::size_t a = 0; a < model.dim_g(); ++a)
      for (const auto& [mono, c] : model.eta(a).terms()) CHECK(model.weight(mono) == model.root(a));
  }
}

TEST_CASE("casimir images are scalars") {
  const FlagModel p1(FlagConfig::projective(2));
  const auto c2 = p1.lie().casimirs();
  const WeylOperator img = p1.casimir_operator(c2[0]);
  CHECK(img == WeylOperator::constant(1, Scalar::ratio(-1, 2)));
  for (std::size_t a = 0; a < p1.dim_g(); ++a) CHECK(commutator(p1.eta(a), img).is_zero());

  const FlagModel f3(FlagConfig::full(3));
  for (const auto& c : f3.lie().casimirs()) CHECK(f3.casimir_operator(c).is_scalar());
  const FlagModel p2(FlagConfig::projective(3));
  for (const auto& c : p2.lie().casimirs()) CHECK(p2.casimir_operator(c).is_scalar());
}
