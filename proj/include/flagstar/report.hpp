#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include <json.hpp>

#include "flagstar/suite.hpp"

namespace flagstar {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "flagstar/1";

inline Json config_json(const FlagConfig& cfg) {
  return Json{{"n", cfg.n}, {"dims", cfg.dims}, {"label", cfg.label()}};
}

inline Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c).to_string());
    rows.push_back(row);
  }
  return rows;
}

/// Nonzero entries as [index, value] pairs.
inline Json sparse_json(const std::vector<Scalar>& v) {
  Json out = Json::array();
  for (std::size_t k = 0; k < v.size(); ++k)
    if (!v[k].is_zero()) out.push_back(Json::array({k, v[k].to_string()}));
  return out;
}

inline std::string weight_string(const Weight& w) {
  std::string s = "(";
  for (std::size_t k = 0; k < w.size(); ++k) s += (k ? " " : "") + std::to_string(w[k]);
  return s + ")";
}

/// dim S^d(g) = C(dim g + d - 1, d).
inline std::size_t symmetric_power_dim(std::size_t n, int d) {
  std::size_t r = 1;
  for (int i = 1; i <= d; ++i) r = r * (n + static_cast<std::size_t>(i) - 1) / static_cast<std::size_t>(i);
  return r;
}

inline std::string dims_csv(const Quantization& q) {
  std::ostringstream os;
  os << "d,dim_S,dim_I,dim_R\n";
  for (int d = 0; d <= q.degree(); ++d) {
    const IdealData& id = q.ideal(d);
    os << d << ',' << id.dim_s() << ',' << id.dim_i() << ',' << q.classical().dim(d) << '\n';
  }
  return os.str();
}

inline std::string gram_pivots_csv(const Quantization& q) {
  const LieAlgebra& g = q.model().lie();
  std::ostringstream os;
  os << "block,weight,level,element,pivot\n";
  for (std::size_t b = 0; b < q.blocks().size(); ++b) {
    const GramBlock& blk = q.blocks()[b];
    for (std::size_t r = 0; r < blk.members.size(); ++r)
      os << b << ",\"" << weight_string(blk.weight) << "\"," << blk.levels[r] << ',' << multiset_name(g, q.dmodule().set_of(blk.members[r]))
         << ',' << (r < blk.pivots.size() ? blk.pivots[r].to_string() : "singular") << '\n';
  }
  return os.str();
}

inline std::string lambda_pairing_csv(const Quantization& q) {
  const LieAlgebra& g = q.model().lie();
  std::ostringstream os;
  os << "x";
  for (std::size_t y = 0; y < g.dim(); ++y) os << ',' << g.name(y);
  os << '\n';
  for (std::size_t x = 0; x < g.dim(); ++x) {
    os << g.name(x);
    for (std::size_t y = 0; y < g.dim(); ++y)
      os << ',' << (q.degree() >= 1 ? q.lambda_apply(g.unit(x), q.model().mu(y), 1).constant_term().to_string() : "");
    os << '\n';
  }
  return os.str();
}

/// The quantization data: per degree the R basis, T on D, bq and its inverse, and the Gram data.
inline Json quantization_json(const Pipeline& p) {
  const Quantization& q = p.quantization();
  const ClassicalSide& cs = p.classical();
  const DModuleSide& dm = p.dmodule();
  const LieAlgebra& g = p.model().lie();
  Json degrees = Json::array();
  for (int d = 0; d <= p.degree(); ++d) {
    Json basis = Json::array(), bq = Json::array(), bq_inv = Json::array(), trace = Json::array();
    for (std::size_t k = 0; k < cs.dim(d); ++k) {
      const std::size_t j = dm.offset(d) + k;
      basis.push_back(Json{{"element", multiset_name(g, dm.set_of(j))}, {"symbol", cs.basis(d, k).to_string()}});
      bq.push_back(Json{{"operator", q.bq_basis(d, k).to_string()},
                        {"lift_coordinates", sparse_json(dm.coordinates(q.bq_basis(d, k), d))}});
      const auto comps = q.bq_inverse(dm.basis(j));
      Json parts = Json::array();
      for (std::size_t e = 0; e < comps.size(); ++e)
        if (!comps[e].is_zero()) parts.push_back(Json{{"degree", e}, {"coordinates", sparse_json(cs.coordinates(comps[e], static_cast<int>(e)))}});
      bq_inv.push_back(parts);
      trace.push_back(p.trace()(dm.basis(j)).to_string());
    }
    degrees.push_back(Json{{"degree", d},
                           {"R_basis", basis},
                           {"trace_on_lifts", trace},
                           {"bq", bq},
                           {"bq_inverse_of_lifts", bq_inv},
                           {"inner_gram", matrix_json(q.inner_gram(d))}});
  }
  Json blocks = Json::array();
  for (const auto& b : q.blocks()) {
    Json members = Json::array(), pivots = Json::array();
    for (auto j : b.members) members.push_back(multiset_name(g, dm.set_of(j)));
    for (const auto& v : b.pivots) pivots.push_back(v.to_string());
    blocks.push_back(Json{{"weight", b.weight}, {"members", members}, {"gamma", matrix_json(b.gamma)}, {"ldl_pivots", pivots}});
  }
  return Json{{"schema", kSchema}, {"config", config_json(p.model().config())}, {"degree", p.degree()},
              {"degrees", degrees}, {"gram_blocks", blocks}};
}

inline Json summary_json(const Pipeline& p, const std::vector<Check>& checks) {
  Json list = Json::array();
  std::map<std::string, int> counts{{"pass", 0}, {"fail", 0}, {"reported", 0}};
  for (const auto& c : checks) {
    list.push_back(Json{{"name", c.name}, {"anchor", c.anchor}, {"status", status_name(c.status)}, {"witness", c.witness}});
    ++counts[status_name(c.status)];
  }
  const LieAlgebra& g = p.model().lie();
  Json quad = Json::object();
  if (p.degree() >= 1)
    for (std::size_t a = 0; a < g.dim(); ++a)
      for (std::size_t b = 0; b < g.dim(); ++b) {
        const Scalar t = p.trace().pair(p.model().eta(a), p.model().eta(b));
        if (!t.is_zero()) quad["T(eta^" + g.name(a) + " eta^" + g.name(b) + ")"] = t.to_string();
      }
  return Json{{"schema", kSchema},
              {"config", config_json(p.model().config())},
              {"degree", p.degree()},
              {"status", counts["fail"] == 0 ? "pass" : "fail"},
              {"counts", Json{{"pass", counts["pass"]}, {"fail", counts["fail"]}, {"reported", counts["reported"]}}},
              {"trace_quadratic", quad},
              {"checks", list}};
}

/// File name to content for the whole report bundle.
inline std::map<std::string, std::string> report_bundle(const Pipeline& p, const std::vector<Check>& checks) {
  return {{"summary.json", summary_json(p, checks).dump(2) + "\n"},
          {"dims.csv", dims_csv(p.quantization())},
          {"gram_pivots.csv", gram_pivots_csv(p.quantization())},
          {"lambda_pairing.csv", lambda_pairing_csv(p.quantization())},
          {"quantization.json", quantization_json(p).dump(2) + "\n"}};
}

inline void write_bundle(const std::filesystem::path& dir, const std::map<std::string, std::string>& files) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, content] : files) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    out << content;
  }
}

}  // namespace flagstar
