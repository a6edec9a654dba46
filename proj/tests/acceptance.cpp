// Acceptance run: one line per criterion, exit status 1 if any criterion fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "flagstar/report.hpp"

using namespace flagstar;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt_seconds(double s) {
  std::ostringstream os;
  os.precision(2);
  os << std::fixed << s << " s";
  return os.str();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

unsigned default_jobs() { return std::max(1u, std::min(4u, std::thread::hardware_concurrency())); }

/// A pipeline plus the suite groups already run on it, so criteria can share work.
struct Workbench {
  std::unique_ptr<Pipeline> pipeline;
  std::unique_ptr<Suite> suite;
  std::map<std::string, std::vector<Check>> groups;
  double build_seconds = 0;

  Workbench(FlagConfig cfg, int degree) {
    const auto t0 = Clock::now();
    pipeline = std::make_unique<Pipeline>(std::move(cfg), degree, PipelineOptions{default_jobs(), false});
    suite = std::make_unique<Suite>(*pipeline);
    build_seconds = seconds_since(t0);
  }

  std::string label() const { return pipeline->model().config().label() + " D=" + std::to_string(pipeline->degree()); }

  const std::vector<Check>& group(const std::string& name) {
    auto it = groups.find(name);
    if (it != groups.end()) return it->second;
    std::vector<Check> checks;
    if (name == "flag") checks = suite->flag_realization();
    else if (name == "trace") checks = suite->trace_checks();
    else if (name == "gram") checks = suite->gram_checks();
    else if (name == "star") checks = suite->star_checks();
    else if (name == "lambda") checks = suite->lambda_checks();
    else if (name == "inner") checks = suite->inner_product_checks();
    else if (name == "sym") checks = suite->symmetrization_checks();
    else if (name == "split") checks = suite->splitting_checks();
    else throw std::logic_error("unknown group " + name);
    return groups.emplace(name, std::move(checks)).first->second;
  }

  /// Requires the named check of a group to carry the expected status.
  void expect(Outcome& o, const std::string& grp, const std::string& check, Status want = Status::pass) {
    for (const auto& c : group(grp))
      if (c.name == check) {
        o.require(c.status == want, label() + ": '" + check + "' is " + status_name(c.status) + " (" + c.witness + ")");
        return;
      }
    o.require(false, label() + ": no check named '" + check + "'");
  }
};

Outcome criterion1(Workbench& sl2) {
  Outcome o;
  const auto t0 = Clock::now();
  for (const char* name : {"eta is a Lie algebra homomorphism", "half-density fields are transpose-antisymmetric",
                           "moment functions bracket like the Lie algebra", "principal symbol of eta^x is mu^x"})
    sl2.expect(o, "flag", name);
  const FlagModel& model = sl2.pipeline->model();
  const WeylOperator cas = model.casimir_operator(model.lie().casimirs().front());
  o.require(cas == Scalar::ratio(-1, 2) * WeylOperator::identity(model.m()), "casimir image is " + cas.to_string());
  const double secs = sl2.build_seconds + seconds_since(t0);
  o.require(secs < 10.0, "runtime " + fmt_seconds(secs) + " exceeds 10 s");
  o.note("casimir image -1/2, " + fmt_seconds(secs));
  return o;
}

Outcome criterion2(Workbench& sl2) {
  Outcome o;
  const FlagModel& model = sl2.pipeline->model();
  const TraceFunctional& t = sl2.pipeline->trace();
  const LieAlgebra& g = model.lie();
  const std::size_t e = *g.find("E12"), f = *g.find("E21"), h = *g.find("H1");
  o.require(t(WeylOperator::identity(model.m())) == Scalar(1), "T(1) != 1");
  for (std::size_t a = 0; a < g.dim(); ++a) o.require(t(model.eta(a)).is_zero(), "T(eta^" + g.name(a) + ") != 0");
  const Scalar ef = t.pair(model.eta(e), model.eta(f)), hh = t.pair(model.eta(h), model.eta(h));
  o.require(ef == Scalar::ratio(-1, 6), "T(eta^e eta^f) = " + ef.to_string());
  o.require(hh == Scalar::ratio(-1, 3), "T(eta^h eta^h) = " + hh.to_string());
  // the casimir e f + f e + h^2/2 acts by the scalar -1/2 on half-densities
  const Scalar cas = Scalar(2) * ef + Scalar::ratio(1, 2) * hh;
  o.require(cas == Scalar::ratio(-1, 2), "2 T(ef) + T(hh)/2 = " + cas.to_string());
  const Scalar scalar = model.casimir_operator(g.casimirs().front()).constant_term();
  o.require(cas == scalar, "trace and casimir scalar disagree");
  sl2.expect(o, "trace", "trace normalization and quadratic values");
  o.note("T(eta^e eta^f) = " + ef.to_string() + ", T(eta^h eta^h) = " + hh.to_string() + ", casimir identity " + cas.to_string());
  return o;
}

Outcome criterion3(std::vector<Workbench*> benches) {
  Outcome o;
  double secs = 0;
  std::string smallest;
  for (auto* w : benches) {
    const auto t0 = Clock::now();
    const Quantization& q = w->pipeline->quantization();
    Scalar least;
    bool first = true;
    for (const auto& b : q.blocks()) {
      o.require(b.pivots.size() == b.members.size(), w->label() + ": singular Gram block");
      for (const auto& p : b.pivots) {
        o.require(is_positive_rational(p), w->label() + ": pivot " + p.to_string());
        if (p.is_real() && (first || p.real() < least.real())) least = p, first = false;
      }
    }
    w->expect(o, "gram", "every Gram LDL* pivot is a positive rational");
    w->expect(o, "inner", "distinct degrees of R are orthogonal");
    // <R^j|R^k> = 0 for j != k, directly from T on quantized basis elements
    const int D = w->pipeline->degree();
    const ClassicalSide& cs = w->pipeline->classical();
    for (int j = 0; j <= D; ++j)
      for (int k = j + 1; k <= D; ++k)
        for (std::size_t a = 0; a < cs.dim(j); a += std::max<std::size_t>(1, cs.dim(j) / 4))
          for (std::size_t b = 0; b < cs.dim(k); b += std::max<std::size_t>(1, cs.dim(k) / 4))
            o.require(q.inner_direct(cs.basis(j, a), j, cs.basis(k, b), k).is_zero(),
                      w->label() + ": <R^" + std::to_string(j) + "|R^" + std::to_string(k) + "> != 0");
    secs += w->build_seconds + seconds_since(t0);
    smallest += (smallest.empty() ? "" : ", ") + w->label() + " min pivot " + least.to_string();
  }
  o.require(secs < 300.0, "runtime " + fmt_seconds(secs) + " exceeds 5 min");
  o.note(smallest + ", " + fmt_seconds(secs));
  return o;
}

Outcome criterion4(std::vector<Workbench*> benches) {
  Outcome o;
  for (auto* w : benches) {
    for (const char* name : {"C0 is the product and C1 half the Poisson bracket", "parity C_p(phi,psi) = (-1)^p C_p(psi,phi)",
                             "support of C_p within degrees |j-k|..j+k", "star commutes with conjugation"})
      w->expect(o, "star", name);
    w->expect(o, "lambda", "three-term identity mu^x * phi");
    w->expect(o, "lambda", "Lambda^x is the adjoint of multiplication by mu^{sigma x}");
  }
  if (o.pass) o.note("star laws, support bound and three-term identity on " + std::to_string(benches.size()) + " configurations");
  return o;
}

Outcome criterion5(std::vector<Workbench*> benches, Workbench& sl2) {
  Outcome o;
  for (auto* w : benches)
    for (const char* name : {"Lambda^x has degree -1", "the Lambda^x commute", "[Phi^x, Lambda^y] = Lambda^[x,y]",
                             "Lambda^x(mu^y) is a nondegenerate invariant symmetric pairing"})
      w->expect(o, "lambda", name);
  const LieAlgebra& g = sl2.pipeline->model().lie();
  const Matrix pm = sl2.suite->lambda_pairing();
  for (std::size_t x = 0; x < g.dim(); ++x)
    for (std::size_t y = 0; y < g.dim(); ++y) {
      const Scalar want = Scalar::ratio(-1, 6) * g.trace_form(g.unit(x), g.unit(y));
      o.require(pm(x, y) == want, "sl2: Lambda^" + g.name(x) + "(mu^" + g.name(y) + ") = " + pm(x, y).to_string());
    }
  if (o.pass) o.note("sl2 Lambda^x(mu^y) = -1/6 tr(xy)");
  return o;
}

Outcome criterion6(Workbench& p1, Workbench& p2, Workbench& full) {
  Outcome o;
  p1.expect(o, "sym", "bfr equals bq");
  p2.expect(o, "sym", "bfr equals bq");
  std::string evidence;
  for (const auto& c : full.group("sym"))
    if (c.name == "bfr equals bq") {
      o.require(c.status == Status::reported, "full flag comparison must be reported, got " + std::string(status_name(c.status)));
      evidence = c.witness;
    }
  o.require(!evidence.empty(), "full flag comparison missing");
  o.note("full flag (reported): " + evidence);
  return o;
}

Outcome criterion7(std::vector<Workbench*> benches) {
  Outcome o;
  for (auto* w : benches) {
    w->expect(o, "split", "tau-splitting and trace-orthogonal splitting reproduce V^d");
    w->expect(o, "split", "T(V^j V^k) = 0 for j != k");
    w->expect(o, "inner", "<mu^{x1}...mu^{xd}|psi> = Lambda^{sigma x1}...Lambda^{sigma xd} psi");
  }
  if (o.pass) o.note("splittings agree and random words satisfy the Lambda pairing, d <= 3");
  return o;
}

Outcome criterion8() {
  Outcome o;
  const Pipeline p(FlagConfig::projective(2), 4, PipelineOptions{default_jobs(), false});
  for (int order : {4, 3}) {
    const ProbeReport r = rpn_probe(p.quantization(), order, 8);
    std::string line = "order <= " + std::to_string(order) + ": ";
    for (const auto& g : r.generators) {
      const bool witnessed = g.feasible ? !g.solution.empty() || g.solution_dim > 0 : !g.certificate.empty();
      o.require(witnessed, g.generator + " has no witness");
      line += g.generator + (g.feasible ? " feasible (solution order " + std::to_string(g.solution_order) + ", " +
                                              std::to_string(g.solution.size()) + " terms)"
                                        : " infeasible (certificate on " + std::to_string(g.certificate.size()) + " equations)") +
              " ";
    }
    o.note(line + "[" + std::to_string(r.unknowns) + " unknowns, " + std::to_string(r.equations) + " equations]");
  }
  return o;
}

Outcome criterion9() {
  Outcome o;
  for (const auto& [cfg, degree] : std::vector<std::pair<FlagConfig, int>>{{FlagConfig::projective(2), 4}, {FlagConfig::full(3), 2}}) {
    std::vector<std::map<std::string, std::string>> bundles;
    for (unsigned jobs : {1u, 3u}) {
      const Pipeline p(cfg, degree, PipelineOptions{jobs, false});
      bundles.push_back(report_bundle(p, Suite(p).run()));
    }
    for (const auto& [name, content] : bundles[0]) {
      const auto it = bundles[1].find(name);
      o.require(it != bundles[1].end() && it->second == content, cfg.label() + ": " + name + " differs between jobs 1 and 3");
    }
    o.require(bundles[0].size() == bundles[1].size() && bundles[0].size() == 5, cfg.label() + ": bundle file sets differ");
  }
  if (o.pass) o.note("sl2[1] D=4 and sl3[1,2] D=2 bundles byte-identical for jobs 1 and 3");
  return o;
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria;
  std::unique_ptr<Workbench> sl2_5, sl2_3, p2_3, full_3;
  auto benches = [&] { return std::vector<Workbench*>{sl2_5.get(), p2_3.get(), full_3.get()}; };

  int failures = 0;
  auto report = [&](int k, const std::string& title, const std::function<Outcome()>& f) {
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    if (!o.pass) ++failures;
    std::cout << "criterion " << k << " [" << (o.pass ? "PASS" : "FAIL") << "] " << title << " :: " << o.detail << std::endl;
  };

  report(1, "sl2 D=5 model invariants", [&] {
    sl2_5 = std::make_unique<Workbench>(FlagConfig::projective(2), 5);
    return criterion1(*sl2_5);
  });
  report(2, "sl2 D=5 trace values", [&] { return criterion2(*sl2_5); });
  report(3, "Gram positivity and orthogonal grading", [&] {
    p2_3 = std::make_unique<Workbench>(FlagConfig::projective(3), 3);
    full_3 = std::make_unique<Workbench>(FlagConfig::full(3), 3);
    return criterion3(benches());
  });
  report(4, "star laws and three-term identity", [&] { return criterion4(benches()); });
  report(5, "Lambda suite", [&] { return criterion5(benches(), *sl2_5); });
  report(6, "bfr equals bq on multiplicity-free spaces", [&] {
    sl2_3 = std::make_unique<Workbench>(FlagConfig::projective(2), 3);
    return criterion6(*sl2_3, *p2_3, *full_3);
  });
  report(7, "cross-characterizations", [&] { return criterion7(benches()); });
  report(8, "projective probe Lambda = P^{-1} L (evidence)", [&] { return criterion8(); });
  report(9, "determinism across job counts", [&] { return criterion9(); });

  std::cout << (failures == 0 ? "all 9 criteria pass" : std::to_string(failures) + " criteria fail") << std::endl;
  return failures == 0 ? 0 : 1;
}
