#include <catch2/catch_amalgamated.hpp>

#include "flagstar/dmodule.hpp"

using namespace flagstar;

namespace {

// Oracle: rank of the span of all eta-words of length <= d, by full-operator row reduction.
std::size_t word_span_rank(const FlagModel& model, int d) {
  Echelon<NoPayload> span;
  std::vector<std::vector<int>> words{{}};
  std::vector<WeylOperator> ops{WeylOperator::identity(model.m())};
  span.insert(ops[0].terms(), {});
  for (int len = 1; len <= d; ++len) {
    std::vector<std::vector<int>> next_words;
    std::vector<WeylOperator> next_ops;
    for (std::size_t k = 0; k < words.size(); ++k) {
      if (static_cast<int>(words[k].size()) != len - 1) continue;
      for (std::size_t a = 0; a < model.dim_g(); ++a) {
        auto w = words[k];
        w.insert(w.begin(), static_cast<int>(a));
        WeylOperator op = model.eta(a) * ops[k];
        span.insert(op.terms(), {});
        next_words.push_back(std::move(w));
        next_ops.push_back(std::move(op));
      }
    }
    words = std::move(next_words);
    ops = std::move(next_ops);
  }
  return span.rank();
}

}  // namespace

TEST_CASE("filtered dimensions of D") {
  const FlagModel model(FlagConfig::projective(2));
  const ClassicalSide cs(model, 3);
  const DModuleSide dm(cs, 3);
  CHECK(dm.dim(0) == 1);
  CHECK(dm.dim(1) == 4);
  CHECK(dm.dim(2) == 9);
  CHECK(dm.dim(3) == 16);
  CHECK(dm.basis(0) == WeylOperator::identity(1));
  for (int d = 0; d <= 3; ++d) CHECK(word_span_rank(model, d) == dm.dim(d));

  const FlagModel p2(FlagConfig::projective(3));
  const ClassicalSide c2(p2, 2);
  const DModuleSide d2(c2, 2);
  CHECK(word_span_rank(p2, 2) == d2.dim(2));
  const FlagModel f3(FlagConfig::full(3));
  const ClassicalSide c3(f3, 2);
  const DModuleSide d3(c3, 2);
  CHECK(word_span_rank(f3, 2) == d3.dim(2));
}

TEST_CASE("closure of the lifted basis") {
  for (const auto& cfg : {FlagConfig::projective(2), FlagConfig::projective(3), FlagConfig::full(3)}) {
    const FlagModel model(cfg);
    const ClassicalSide cs(model, 3);
    const DModuleSide dm(cs, 3);
    INFO(cfg.label());
    for (int d = 1; d <= 3; ++d) CHECK(dm.verify_closure(d));
    for (std::size_t j = 0; j < dm.dim(3); ++j) {
      const WeylOperator& b = dm.basis(j);
      const int lvl = dm.level_of(j);
      CHECK(dm.contains(b.transpose(), lvl));
      CHECK(dm.contains(b.bar(), lvl));
      const PolyZP s = b.symbol(lvl);
      CHECK(b.transpose().symbol(lvl) == (lvl % 2 == 0 ? s : -s));
      for (std::size_t a = 0; a < model.dim_g(); ++a) CHECK(dm.contains(dm.ad(a, b), lvl));
    }
  }
}

TEST_CASE("coordinates round-trip and reject non-members") {
  const FlagModel model(FlagConfig::projective(3));
  const ClassicalSide cs(model, 2);
  const DModuleSide dm(cs, 2);
  const WeylOperator a = model.eta(0) * model.eta(5) - Scalar::ratio(3, 4) * model.eta(2);
  CHECK(dm.element(dm.coordinates(a, 2)) == a);
  CHECK_THROWS_AS(dm.coordinates(WeylOperator::z(model.m(), 0), 2), ConsistencyError);
  CHECK_THROWS_AS(dm.coordinates(a, 1), ConsistencyError);
}

TEST_CASE("sigma_D") {
  const FlagModel model(FlagConfig::projective(2));
  const ClassicalSide cs(model, 3);
  const DModuleSide dm(cs, 3);
  const LieAlgebra& g = model.lie();
  const std::size_t e = g.e_index(0, 1), f = g.e_index(1, 0), h = g.h_index(0);
  CHECK(dm.sigma(model.eta(e), 1) == -model.eta(f));
  CHECK(dm.sigma(WeylOperator::identity(1), 0) == WeylOperator::identity(1));
  CHECK(dm.sigma(model.eta(e) * model.eta(f), 2) == model.eta(f) * model.eta(e));
  CHECK(dm.sigma(Scalar::i() * model.eta(h), 1) == Scalar::i() * model.eta(h));

  for (const auto& cfg : {FlagConfig::projective(2), FlagConfig::projective(3), FlagConfig::full(3)}) {
    const FlagModel fm(cfg);
    const ClassicalSide c(fm, 3);
    const DModuleSide d(c, 3);
    INFO(cfg.label());
    for (std::size_t j = 0; j < d.dim(3); ++j) {
      const int lvl = d.level_of(j);
      const WeylOperator s = d.sigma(d.basis(j), lvl);
      CHECK(d.sigma(s, lvl) == d.basis(j));
      CHECK(d.sigma(d.basis(j).bar(), lvl) == s.bar());
      if (lvl < 3)
        for (std::size_t a = 0; a < fm.dim_g(); ++a) {
          // multiplicativity on generators: sigma(eta^a B) = sigma(eta^a) sigma(B)
          const WeylOperator lhs = d.sigma(fm.eta(a) * d.basis(j), lvl + 1);
          CHECK(lhs == -fm.eta(fm.lie().sigma_index(a)) * s);
        }
    }
  }
}

TEST_CASE("ad action") {
  const FlagModel model(FlagConfig::projective(2));
  const ClassicalSide cs(model, 2);
  const DModuleSide dm(cs, 2);
  const LieAlgebra& g = model.lie();
  const std::size_t e = g.e_index(0, 1), h = g.h_index(0);
  CHECK(dm.ad(h, model.eta(e)) == Scalar(2) * model.eta(e));
  CHECK(dm.ad(e, WeylOperator::identity(1)).is_zero());
}

TEST_CASE("only constants are invariant") {
  for (const auto& cfg : {FlagConfig::projective(2), FlagConfig::projective(3), FlagConfig::full(3)}) {
    const FlagModel model(cfg);
    const ClassicalSide cs(model, 2);
    const DModuleSide dm(cs, 2);
    const std::size_t n = dm.dim(2), dg = model.dim_g();
    Matrix stacked(dg * n, n);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t a = 0; a < dg; ++a) {
        const auto c = dm.coordinates(dm.ad(a, dm.basis(j)), 2);
        for (std::size_t i = 0; i < n; ++i) stacked(a * n + i, j) = c[i];
      }
    const auto ker = nullspace(stacked);
    REQUIRE(ker.size() == 1);
    auto unit = std::vector<Scalar>(n);
    unit[0] = 1;
    CHECK(ker[0] == unit);
  }
}
