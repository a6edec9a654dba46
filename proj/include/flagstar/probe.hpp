#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <tuple>
#include <string>
#include <vector>

#include "flagstar/quantization.hpp"

namespace flagstar {

/// Unknown operator term z^a p^b d_z^c d_p^e acting on symbol polynomials.
struct ProbeTerm {
  Monomial coefficient;  // exponents over (z, p)
  Monomial derivative;   // exponents over (d_z, d_p)
};

struct ProbeGenerator {
  std::string generator;
  bool feasible = false;
  std::size_t solution_dim = 0;                       // dimension of the affine solution set
  int solution_order = -1;                            // order of the reported solution
  std::vector<std::pair<std::string, Scalar>> solution;
  std::vector<std::pair<ProbeTerm, Scalar>> solution_terms;
  // For an infeasible system: y with y^T A = 0 and y^T b != 0, listed by equation label.
  std::vector<std::pair<std::string, Scalar>> certificate;
};

struct ProbeReport {
  int degree = 0;
  int max_order = 0;
  int coefficient_degree = 0;
  std::size_t unknowns = 0;
  std::size_t equations = 0;
  std::vector<ProbeGenerator> generators;
  bool all_feasible() const {
    for (const auto& g : generators)
      if (!g.feasible) return false;
    return true;
  }
};

namespace detail {

/// d^B x^E = prod E!/(E-B)! x^{E-B}, or zero.
inline std::optional<std::pair<Monomial, Scalar>> differentiate(const Monomial& e, const Monomial& b) {
  if (!b.divides(e)) return std::nullopt;
  mpz_class f = 1;
  for (std::size_t k = 0; k < e.size(); ++k)
    for (int j = 0; j < b[k]; ++j) f *= e[k] - j;
  return std::pair{e / b, Scalar(mpq_class(f))};
}

inline PolyZP apply_term(const ProbeTerm& t, const PolyZP& f) {
  PolyZP out(f.nvars());
  for (const auto& [mono, c] : f.terms()) {
    const auto d = differentiate(mono, t.derivative);
    if (d) out += PolyZP::monomial(d->first * t.coefficient, c * d->second);
  }
  return out;
}

inline void for_each_monomial(std::size_t nvars, int max_degree, const std::function<void(const Monomial&)>& fn) {
  std::vector<int> e(nvars, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t k, int left) {
    if (k == nvars) {
      fn(Monomial(std::span<const int>(e)));
      return;
    }
    for (int v = 0; v <= left; ++v) {
      e[k] = v;
      rec(k + 1, left - v);
    }
    e[k] = 0;
  };
  rec(0, max_degree);
}

inline std::string term_name(const ProbeTerm& t, std::size_t m) {
  std::string s;
  auto put = [&](const std::string& base, std::size_t k, int e) {
    if (e == 0) return;
    if (!s.empty()) s += '*';
    s += base + std::to_string(k + 1);
    if (e > 1) s += '^' + std::to_string(e);
  };
  for (std::size_t k = 0; k < m; ++k) put("z", k, t.coefficient[k]);
  for (std::size_t k = 0; k < m; ++k) put("p", k, t.coefficient[m + k]);
  for (std::size_t k = 0; k < m; ++k) put("dz", k, t.derivative[k]);
  for (std::size_t k = 0; k < m; ++k) put("dp", k, t.derivative[m + k]);
  return s.empty() ? "1" : s;
}

}  // namespace detail

/// Eigenvalue (d + n/2)(d + n/2 + 1) of P on R^d over an n-dimensional projective space.
inline Scalar rpn_eigenvalue(int d, std::size_t n) {
  const Scalar x = Scalar(d) + Scalar(mpq_class(static_cast<long>(n), 2));
  return x * (x + Scalar(1));
}

/// Bounded-order search for L^x with Lambda^x = P^{-1} L^x on projective space.
///
/// P acts on R^d by (d + n/2)(d + n/2 + 1), n = dim X. The unknown L^x ranges
/// over polynomial-coefficient operators in the symbol variables (z, p) of
/// order <= max_order and coefficient degree <= coefficient_degree, lowering
/// the fiber degree by one and carrying the weight of x; these are the only
/// terms that can contribute. L^x must agree with P Lambda^x on R^0..R^D.
inline ProbeReport rpn_probe(const Quantization& q, int max_order, int coefficient_degree) {
  const FlagModel& model = q.model();
  if (!model.config().is_projective()) throw std::invalid_argument("probe-rpn requires a projective space");
  const std::size_t m = model.m();
  const ClassicalSide& cs = q.classical();
  const int D = q.degree();
  ProbeReport report;
  report.degree = D;
  report.max_order = max_order;
  report.coefficient_degree = coefficient_degree;

  std::vector<ProbeTerm> all;
  detail::for_each_monomial(2 * m, coefficient_degree, [&](const Monomial& a) {
    detail::for_each_monomial(2 * m, max_order, [&](const Monomial& b) {
      if (a.partial_degree(m, 2 * m) - b.partial_degree(m, 2 * m) == -1) all.push_back({a, b});
    });
  });
  auto term_weight = [&](const ProbeTerm& t) {
    Weight w = model.zero_weight();
    for (std::size_t k = 0; k < m; ++k) {
      const int net = t.coefficient[k] - t.coefficient[m + k] - t.derivative[k] + t.derivative[m + k];
      const Weight ck = model.coordinate_weight(k);
      for (std::size_t r = 0; r < w.size(); ++r) w[r] += net * ck[r];
    }
    return w;
  };

  const LieAlgebra& g = model.lie();
  for (std::size_t x = 0; x < g.dim(); ++x) {
    const Weight target = model.root(x);
    std::vector<ProbeTerm> terms;
    for (const auto& t : all)
      if (term_weight(t) == target) terms.push_back(t);

    // one equation per (degree, basis element, output monomial)
    std::map<std::tuple<int, std::size_t, Monomial>, std::size_t> row_of;
    std::vector<std::string> labels;
    std::vector<std::vector<std::pair<std::size_t, Scalar>>> columns(terms.size());
    std::vector<std::pair<std::size_t, Scalar>> rhs;
    auto row = [&](int d, std::size_t k, const Monomial& mono) {
      auto [it, inserted] = row_of.try_emplace({d, k, mono}, labels.size());
      if (inserted) labels.push_back("R" + std::to_string(d) + "[" + std::to_string(k) + "]:" + mono.exponent_string());
      return it->second;
    };
    for (int d = 0; d <= D; ++d) {
      const Matrix lam = q.lambda(g.unit(x), d);
      for (std::size_t k = 0; k < cs.dim(d); ++k) {
        const PolyZP& phi = cs.basis(d, k);
        if (d > 0) {
          PolyZP goal = cs.element(d - 1, lam.column(k));
          goal = rpn_eigenvalue(d - 1, m) * goal;
          for (const auto& [mono, c] : goal.terms()) rhs.push_back({row(d, k, mono), c});
        }
        for (std::size_t u = 0; u < terms.size(); ++u) {
          const PolyZP image = detail::apply_term(terms[u], phi);
          for (const auto& [mono, c] : image.terms()) columns[u].push_back({row(d, k, mono), c});
        }
      }
    }
    Matrix a(labels.size(), terms.size());
    std::vector<Scalar> b(labels.size());
    for (std::size_t u = 0; u < terms.size(); ++u)
      for (const auto& [r, c] : columns[u]) a(r, u) += c;
    for (const auto& [r, c] : rhs) b[r] += c;
    report.unknowns += terms.size();
    report.equations += labels.size();

    ProbeGenerator out;
    out.generator = g.name(x);
    if (const auto sol = solve(a, b)) {
      out.feasible = true;
      out.solution_dim = terms.size() - rank(a);
      for (std::size_t u = 0; u < terms.size(); ++u) {
        if ((*sol)[u].is_zero()) continue;
        out.solution.push_back({detail::term_name(terms[u], m), (*sol)[u]});
        out.solution_terms.push_back({terms[u], (*sol)[u]});
        out.solution_order = std::max(out.solution_order, terms[u].derivative.degree());
      }
    } else {
      for (const auto& y : nullspace(a.transpose())) {
        if (dot(y, b).is_zero()) continue;
        for (std::size_t r = 0; r < y.size(); ++r)
          if (!y[r].is_zero()) out.certificate.push_back({labels[r], y[r]});
        break;
      }
    }
    report.generators.push_back(std::move(out));
  }
  return report;
}

}  // namespace flagstar
