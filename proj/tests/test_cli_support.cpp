#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <random>

#include "flagstar/report.hpp"
#include "flagstar/run_config.hpp"

using namespace flagstar;

namespace {

std::filesystem::path fresh_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("flagstar-test-" + name + "-" + std::to_string(std::random_device{}()));
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("expression parser builds the expected symmetric polynomial", "[cli][parser]") {
  const LieAlgebra g(2);
  const std::size_t e = *g.find("E12"), f = *g.find("E21"), h = *g.find("H1");
  const SymElement ve = SymElement::variable(g.dim(), e), vf = SymElement::variable(g.dim(), f), vh = SymElement::variable(g.dim(), h);
  const SymElement half = SymElement::constant(g.dim(), Scalar::ratio(1, 2));

  CHECK(parse_expression(g, "E12*E21 - 1/2*H1 + 3") == ve * vf - half * vh + SymElement::constant(g.dim(), Scalar(3)));
  CHECK(parse_expression(g, "E_12 * (E21 + H1)") == ve * (vf + vh));
  CHECK(parse_expression(g, "-(E12)") == -ve);
  CHECK(parse_expression(g, "  2/4 ") == half);
  CHECK(parse_expression(g, "H1*H1 - H1*H1").is_zero());
}

TEST_CASE("expression parser rejects malformed input", "[cli][parser]") {
  const LieAlgebra g(3);
  for (const char* bad : {"", "E12 +", "E14", "H3", "1.5", "(E12", "E12)", "2/", "E12 ^ 2", "1/0"})
    CHECK_THROWS_AS(parse_expression(g, bad), ParseError);
  try {
    parse_expression(g, "E12 + X9");
    FAIL("no error");
  } catch (const ParseError& err) {
    CHECK(std::string(err.what()).find("column 7") != std::string::npos);
  }
}

TEST_CASE("homogeneous parsing reports the degree and rejects mixed degrees", "[cli][parser]") {
  const FlagModel model(FlagConfig::projective(2));
  const auto one = parse_homogeneous(model, "1");
  CHECK(one.degree == 0);
  const auto ef = parse_homogeneous(model, "E12*E21 + 1/3*H1*H1");
  CHECK(ef.degree == 2);
  CHECK(ef.value == model.mu(*model.lie().find("E12")) * model.mu(*model.lie().find("E21")) +
                        Scalar::ratio(1, 3) * model.mu(*model.lie().find("H1")).pow(2));
  CHECK_THROWS_AS(parse_homogeneous(model, "E12 + 1"), ParseError);
  // H1*H1 + 4*E12*E21 vanishes on the cone, so this is homogeneous of degree 1
  CHECK(parse_homogeneous(model, "E12 + H1*H1 + 4*E12*E21").degree == 1);
}

TEST_CASE("run configuration parsing", "[cli][config]") {
  const RunConfig a = load_run_config("sl3[1,2]");
  CHECK(a.flag.n == 3);
  CHECK(a.flag.dims == std::vector<int>{1, 2});
  CHECK(parse_flag_label(" sl4[ 2 ] ").dims == std::vector<int>{2});

  const RunConfig b = parse_run_config(nlohmann::json::parse(R"({"n": 2, "dims": [1], "degree": 4, "probe": {"max_order": 3}})"));
  CHECK(b.degree == 4);
  CHECK(b.probe_max_order == 3);
  CHECK(b.probe_coefficient_degree == 8);
  CHECK(parse_run_config(nlohmann::json::parse(R"({"n": 2, "degree": 0})")).degree == 0);

  for (const char* bad : {R"({"dims": [1]})", R"({"n": 3, "dims": [2, 1]})", R"({"n": 2, "dims": [2]})",
                          R"({"n": 2, "degree": -1})", R"({"n": "two"})", R"([2, 1])"})
    CHECK_THROWS_AS(parse_run_config(nlohmann::json::parse(bad)), ConfigError);
  for (const char* bad : {"sl3", "sl3[]", "su3[1]", "sl1[1]", "sl3[3]"}) CHECK_THROWS_AS(load_run_config(bad), ConfigError);

  const auto dir = fresh_dir("config");
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "good.json") << R"({"n": 3, "dims": [1], "degree": 2})";
    std::ofstream(dir / "broken.json") << R"({"n": 3, )";
  }
  CHECK(load_run_config((dir / "good.json").string()).flag.label() == "sl3[1]");
  CHECK_THROWS_AS(load_run_config((dir / "broken.json").string()), ConfigError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("basis cache round trip reproduces the pipeline", "[cli][cache]") {
  const auto dir = fresh_dir("cache");
  const PipelineOptions cached{2, true, dir};
  const Pipeline cold(FlagConfig::projective(2), 2, cached);
  CHECK_FALSE(cold.cache_hit());
  const Pipeline warm(FlagConfig::projective(2), 2, cached);
  CHECK(warm.cache_hit());
  const Pipeline plain(FlagConfig::projective(2), 2, PipelineOptions{1, false, dir});
  CHECK_FALSE(plain.cache_hit());

  CHECK(report_bundle(cold, {}) == report_bundle(warm, {}));
  CHECK(report_bundle(cold, {}) == report_bundle(plain, {}));

  // a different degree is a different key
  const Pipeline other(FlagConfig::projective(2), 1, cached);
  CHECK_FALSE(other.cache_hit());

  // a corrupted entry is a miss, and is rewritten
  const BasisCache cache(dir);
  const std::string key = BasisCache::key(FlagConfig::projective(2), 4, 4);
  std::ofstream(cache.path_for(key)) << "{ not json";
  CHECK_FALSE(cache.load(key, 2).has_value());
  const Pipeline rebuilt(FlagConfig::projective(2), 2, cached);
  CHECK_FALSE(rebuilt.cache_hit());
  CHECK(cache.load(key, 2).has_value());
  CHECK_FALSE(cache.load(key, 4).has_value());
  std::filesystem::remove_all(dir);
}

TEST_CASE("cache keys and hashes are stable", "[cli][cache]") {
  CHECK(BasisCache::key(FlagConfig::full(3), 6, 6) == "flagstar/1|sl3[1,2]|R6|T6");
  // FNV-1a 64 reference values
  CHECK(BasisCache::hash("") == "cbf29ce484222325");
  CHECK(BasisCache::hash("a") == "af63dc4c8601ec8c");
}

TEST_CASE("report tables carry headers, schema and the sl2 values", "[cli][report]") {
  const Pipeline p(FlagConfig::projective(2), 2);
  const auto bundle = report_bundle(p, {{"x", "eq:Delta", Status::pass, "w"}, {"y", "prop:T", Status::reported, "v"}});
  REQUIRE(bundle.size() == 5);

  CHECK(bundle.at("dims.csv") == "d,dim_S,dim_I,dim_R\n0,1,0,1\n1,3,0,3\n2,6,1,5\n");
  CHECK(bundle.at("lambda_pairing.csv") == "x,E12,E21,H1\nE12,0,-1/6,0\nE21,-1/6,0,0\nH1,0,0,-1/3\n");
  CHECK(bundle.at("gram_pivots.csv").rfind("block,weight,level,element,pivot\n", 0) == 0);

  const auto summary = nlohmann::json::parse(bundle.at("summary.json"));
  CHECK(summary.at("schema") == "flagstar/1");
  CHECK(summary.at("status") == "pass");
  CHECK(summary.at("counts").at("reported") == 1);
  CHECK(summary.at("checks").at(0).at("anchor") == "eq:Delta");
  CHECK(summary.at("trace_quadratic").at("T(eta^E12 eta^E21)") == "-1/6");
  CHECK(summary.at("trace_quadratic").at("T(eta^H1 eta^H1)") == "-1/3");

  const auto quant = nlohmann::json::parse(bundle.at("quantization.json"));
  CHECK(quant.at("schema") == "flagstar/1");
  CHECK(quant.at("degrees").size() == 3);
  CHECK(quant.at("degrees").at(0).at("inner_gram") == nlohmann::json::parse(R"([["1"]])"));

  const auto failing = nlohmann::json::parse(summary_json(p, {{"z", "thm:main", Status::fail, "counterexample"}}).dump());
  CHECK(failing.at("status") == "fail");
}

TEST_CASE("tallies keep the first counterexample independent of threads", "[cli][suite]") {
  auto body = [](std::size_t i, Tally& t) {
    t.expect(i % 7 != 3, [i] { return "bad " + std::to_string(i); });
    t.expect(true, [] { return std::string("never"); });
  };
  const Tally one = verify_indexed(50, 1, body), many = verify_indexed(50, 4, body);
  CHECK(one.count() == 100);
  CHECK(many.count() == 100);
  const Check a = one.verdict("n", "eq:T"), b = many.verdict("n", "eq:T");
  CHECK(a.status == Status::fail);
  CHECK(a.witness == "bad 3");
  CHECK(b.witness == a.witness);

  Tally clean;
  clean.expect(true, [] { return std::string(); });
  const Check c = clean.verdict("n", "eq:T", "pairs");
  CHECK(c.status == Status::pass);
  CHECK(c.witness == "1 pairs verified");
}

TEST_CASE("suite reports are identical across job counts", "[cli][suite]") {
  const Pipeline p1(FlagConfig::projective(2), 2, PipelineOptions{1, false}), p3(FlagConfig::projective(2), 2, PipelineOptions{3, false});
  const auto c1 = Suite(p1).run(), c3 = Suite(p3).run();
  CHECK(report_bundle(p1, c1) == report_bundle(p3, c3));
  for (const auto& c : c1) {
    INFO(c.name << ": " << c.witness);
    CHECK(c.status != Status::fail);
    CHECK_FALSE(c.anchor.empty());
  }
}
