#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <regex>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "flagstar/expression.hpp"
#include "flagstar/flag_model.hpp"

namespace flagstar {

/// Invalid run configuration; the CLI maps it to a usage error.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  FlagConfig flag = FlagConfig::projective(2);
  int degree = 3;
  int probe_max_order = 4;
  int probe_coefficient_degree = 8;
};

/// Parses a label of the form "sl3[1,2]".
inline FlagConfig parse_flag_label(const std::string& text) {
  static const std::regex shape(R"(\s*sl(\d+)\s*\[\s*(\d+(?:\s*,\s*\d+)*)\s*\]\s*)");
  std::smatch m;
  if (!std::regex_match(text, m, shape)) throw ConfigError("config: cannot read '" + text + "' as a label like sl3[1,2]");
  FlagConfig cfg{std::stoi(m[1].str()), {}};
  const std::string list = m[2].str();
  static const std::regex number(R"(\d+)");
  for (auto it = std::sregex_iterator(list.begin(), list.end(), number); it != std::sregex_iterator(); ++it)
    cfg.dims.push_back(std::stoi(it->str()));
  return cfg;
}

/// Reads {"n", "dims", "degree", "probe": {"max_order", "coefficient_degree"}}; only "n" is required.
inline RunConfig parse_run_config(const nlohmann::json& j) {
  RunConfig rc;
  try {
    if (!j.is_object()) throw ConfigError("config: expected a JSON object");
    rc.flag.n = j.at("n").get<int>();
    rc.flag.dims = j.value("dims", std::vector<int>{1});
    rc.degree = j.value("degree", rc.degree);
    if (j.contains("probe")) {
      const auto& p = j.at("probe");
      rc.probe_max_order = p.value("max_order", rc.probe_max_order);
      rc.probe_coefficient_degree = p.value("coefficient_degree", rc.probe_coefficient_degree);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  try {
    rc.flag.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (rc.degree < 0) throw ConfigError("config: degree must be non-negative");
  if (rc.probe_max_order < 0 || rc.probe_coefficient_degree < 0) throw ConfigError("config: probe bounds must be non-negative");
  return rc;
}

/// A path to a JSON file, or an inline label such as "sl2[1]".
inline RunConfig load_run_config(const std::string& source) {
  if (std::filesystem::is_regular_file(source)) {
    std::ifstream in(source);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("config: " + source + ": " + e.what());
    }
    return parse_run_config(j);
  }
  RunConfig rc;
  rc.flag = parse_flag_label(source);
  try {
    rc.flag.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return rc;
}

}  // namespace flagstar
