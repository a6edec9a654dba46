#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "flagstar/report.hpp"
#include "flagstar/run_config.hpp"

using namespace flagstar;

namespace {

struct Common {
  std::string config;
  std::optional<int> degree;
  std::string out;
  unsigned jobs = 1;
  bool no_cache = false;
};

struct Loaded {
  RunConfig rc;
  std::unique_ptr<Pipeline> pipeline;
};

Loaded load(const Common& c) {
  Loaded l{load_run_config(c.config), nullptr};
  if (c.degree) {
    if (*c.degree < 0) throw ConfigError("--degree must be non-negative");
    l.rc.degree = *c.degree;
  }
  l.pipeline = std::make_unique<Pipeline>(l.rc.flag, l.rc.degree, PipelineOptions{std::max(1u, c.jobs), !c.no_cache});
  return l;
}

/// Prints to stdout, or writes `name` under --out when one was given.
void emit(const Common& c, const std::string& name, const std::string& content) {
  if (c.out.empty()) {
    std::cout << content;
    return;
  }
  write_bundle(c.out, {{name, content}});
  std::cout << "wrote " << (std::filesystem::path(c.out) / name).string() << '\n';
}

Json header(const Pipeline& p) {
  return Json{{"schema", kSchema}, {"config", config_json(p.model().config())}, {"degree", p.degree()}};
}

int cmd_run(const Common& c) {
  const Loaded l = load(c);
  SuiteOptions so;
  so.probe_max_order = l.rc.probe_max_order;
  so.probe_coefficient_degree = l.rc.probe_coefficient_degree;
  const auto checks = Suite(*l.pipeline, so).run();
  const std::string dir = c.out.empty() ? "flagstar-report" : c.out;
  write_bundle(dir, report_bundle(*l.pipeline, checks));
  bool ok = true;
  for (const auto& ch : checks) {
    std::cout << status_name(ch.status) << " [" << ch.anchor << "] " << ch.name << " :: " << ch.witness << '\n';
    ok = ok && ch.status != Status::fail;
  }
  std::cout << (ok ? "all checks pass" : "some checks FAIL") << "; report in " << dir << '\n';
  return ok ? 0 : 1;
}

int cmd_star(const Common& c, const std::string& phi_text, const std::string& psi_text) {
  const Loaded l = load(c);
  const FlagModel& model = l.pipeline->model();
  const auto phi = parse_homogeneous(model, phi_text), psi = parse_homogeneous(model, psi_text);
  if (phi.degree + psi.degree > l.pipeline->degree())
    throw ConfigError("star: deg phi + deg psi = " + std::to_string(phi.degree + psi.degree) + " exceeds the degree " +
                      std::to_string(l.pipeline->degree()) + "; raise --degree");
  const auto cs = l.pipeline->quantization().star(phi.value, phi.degree, psi.value, psi.degree);
  Json coeffs = Json::array();
  for (std::size_t p = 0; p < cs.size(); ++p) coeffs.push_back(Json{{"p", p}, {"C", cs[p].to_string()}});
  Json j = header(*l.pipeline);
  j["phi"] = Json{{"input", phi_text}, {"degree", phi.degree}, {"symbol", phi.value.to_string()}};
  j["psi"] = Json{{"input", psi_text}, {"degree", psi.degree}, {"symbol", psi.value.to_string()}};
  j["coefficients"] = coeffs;
  emit(c, "star.json", j.dump(2) + "\n");
  return 0;
}

int cmd_lambda(const Common& c, const std::string& x_text, const std::string& phi_text) {
  const Loaded l = load(c);
  const Quantization& q = l.pipeline->quantization();
  if (x_text.empty()) {
    emit(c, "lambda_pairing.csv", lambda_pairing_csv(q));
    return 0;
  }
  const FlagModel& model = l.pipeline->model();
  const SymElement xs = parse_expression(model.lie(), x_text);
  std::vector<Scalar> x(model.lie().dim());
  for (const auto& [mono, coef] : xs.terms()) {
    if (mono.degree() != 1) throw ParseError("lambda: '" + x_text + "' is not a linear combination of basis elements");
    for (std::size_t a = 0; a < x.size(); ++a)
      if (mono[a]) x[a] = coef;
  }
  const auto phi = parse_homogeneous(model, phi_text.empty() ? "1" : phi_text);
  if (phi.degree > l.pipeline->degree()) throw ConfigError("lambda: degree of phi exceeds --degree");
  Json j = header(*l.pipeline);
  j["x"] = x_text;
  j["phi"] = Json{{"input", phi_text}, {"degree", phi.degree}, {"symbol", phi.value.to_string()}};
  j["lambda"] = phi.degree == 0 ? std::string("0") : q.lambda_apply(x, phi.value, phi.degree).to_string();
  emit(c, "lambda.json", j.dump(2) + "\n");
  return 0;
}

int cmd_gram(const Common& c) {
  const Loaded l = load(c);
  emit(c, "gram_pivots.csv", gram_pivots_csv(l.pipeline->quantization()));
  return l.pipeline->quantization().positive_definite() ? 0 : 1;
}

int cmd_dims(const Common& c) {
  const Loaded l = load(c);
  emit(c, "dims.csv", dims_csv(l.pipeline->quantization()));
  return 0;
}

int cmd_probe(const Common& c, std::optional<int> max_order, std::optional<int> coefficient_degree) {
  const Loaded l = load(c);
  if (!l.pipeline->model().config().is_projective()) throw ConfigError("probe-rpn: the configuration must be a projective space sl(n)[1]");
  const auto r = rpn_probe(l.pipeline->quantization(), max_order.value_or(l.rc.probe_max_order),
                           coefficient_degree.value_or(l.rc.probe_coefficient_degree));
  Json gens = Json::array();
  for (const auto& g : r.generators) {
    Json sol = Json::array(), cert = Json::array();
    for (const auto& [name, v] : g.solution) sol.push_back(Json::array({name, v.to_string()}));
    for (const auto& [name, v] : g.certificate) cert.push_back(Json::array({name, v.to_string()}));
    gens.push_back(Json{{"generator", g.generator},
                        {"feasible", g.feasible},
                        {"solution_dim", g.solution_dim},
                        {"solution_order", g.solution_order},
                        {"solution", sol},
                        {"certificate", cert}});
  }
  Json j = header(*l.pipeline);
  j["anchor"] = "sec_Lax";
  j["max_order"] = r.max_order;
  j["coefficient_degree"] = r.coefficient_degree;
  j["unknowns"] = r.unknowns;
  j["equations"] = r.equations;
  j["all_feasible"] = r.all_feasible();
  j["generators"] = gens;
  emit(c, "probe_rpn.json", j.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"flagstar: exact quantization checks on flag manifolds of SL(n)"};
  app.require_subcommand(1);
  Common common;
  std::string phi, psi, x;
  std::optional<int> max_order, coefficient_degree;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config, "JSON config file or a label such as sl3[1,2]")->required();
    sub->add_option("--degree", common.degree, "quantized degree D (overrides the config)");
    sub->add_option("--out", common.out, "output directory");
    sub->add_option("--jobs", common.jobs, "worker threads")->check(CLI::PositiveNumber);
    sub->add_flag("--no-cache", common.no_cache, "do not read or write the basis cache");
  };
  auto* run = app.add_subcommand("run", "run every check and write the report bundle");
  auto* star = app.add_subcommand("star", "print C_p(phi, psi) for all p");
  auto* lambda = app.add_subcommand("lambda", "print Lambda^x(phi), or the pairing table without arguments");
  auto* gram = app.add_subcommand("gram", "print the Gram LDL pivots");
  auto* probe = app.add_subcommand("probe-rpn", "search for Lambda^x = P^{-1} L^x on projective space");
  auto* dims = app.add_subcommand("dims", "print the graded dimensions");
  for (auto* sub : {run, star, lambda, gram, probe, dims}) add_common(sub);
  star->add_option("phi", phi, "homogeneous mu-polynomial, e.g. E12")->required();
  star->add_option("psi", psi, "homogeneous mu-polynomial, e.g. E21")->required();
  lambda->add_option("x", x, "Lie algebra element, e.g. E12 or H1 - 2*E21");
  lambda->add_option("phi", phi, "homogeneous mu-polynomial (default 1)");
  probe->add_option("--max-order", max_order, "largest operator order of L^x");
  probe->add_option("--coefficient-degree", coefficient_degree, "largest coefficient degree of L^x");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run) return cmd_run(common);
    if (*star) return cmd_star(common, phi, psi);
    if (*lambda) return cmd_lambda(common, x, phi);
    if (*gram) return cmd_gram(common);
    if (*probe) return cmd_probe(common, max_order, coefficient_degree);
    if (*dims) return cmd_dims(common);
  } catch (const ConsistencyError& e) {
    std::cerr << "fatal: consistency check " << e.anchor() << " violated: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
