#pragma once

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <unistd.h>

#include <json.hpp>

#include "flagstar/trace.hpp"

namespace flagstar {

/// Stored basis multisets of R up to some degree and the trace table, for one configuration.
struct CachedBases {
  std::vector<std::vector<Multiset>> sets;
  TraceFunctional::Table trace;
};

/// Content-addressed store under $XDG_CACHE_HOME/flagstar (or ~/.cache/flagstar).
///
/// The file name is a 64-bit FNV-1a hash of the key text, and the key text is
/// stored inside the file as well, so a hash collision reads as a miss.
class BasisCache {
 public:
  explicit BasisCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  static std::filesystem::path default_dir() {
    if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) return std::filesystem::path(xdg) / "flagstar";
    if (const char* home = std::getenv("HOME"); home && *home) return std::filesystem::path(home) / ".cache" / "flagstar";
    return std::filesystem::temp_directory_path() / "flagstar-cache";
  }

  static std::string key(const FlagConfig& cfg, int classical_degree, int trace_level) {
    return "flagstar/1|" + cfg.label() + "|R" + std::to_string(classical_degree) + "|T" + std::to_string(trace_level);
  }

  static std::string hash(const std::string& text) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : text) {
      h ^= c;
      h *= 1099511628211ULL;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
  }

  std::filesystem::path path_for(const std::string& key) const { return dir_ / (hash(key) + ".json"); }

  std::optional<CachedBases> load(const std::string& key, std::size_t nvars) const {
    std::ifstream in(path_for(key));
    if (!in) return std::nullopt;
    try {
      const auto j = nlohmann::json::parse(in);
      if (j.at("key").get<std::string>() != key) return std::nullopt;
      CachedBases out;
      out.sets = j.at("sets").get<std::vector<std::vector<Multiset>>>();
      for (const auto& e : j.at("trace")) {
        const auto exps = e.at(0).get<std::vector<int>>();
        if (exps.size() != nvars) return std::nullopt;
        out.trace.emplace(Monomial(std::span<const int>(exps)), Scalar::parse(e.at(1).get<std::string>()));
      }
      return out;
    } catch (const std::exception&) {
      return std::nullopt;  // unreadable entries are rebuilt
    }
  }

  void store(const std::string& key, const CachedBases& data) const {
    std::vector<std::pair<Monomial, Scalar>> entries(data.trace.begin(), data.trace.end());
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    nlohmann::json trace = nlohmann::json::array();
    for (const auto& [mono, c] : entries) {
      std::vector<int> exps(mono.size());
      for (std::size_t k = 0; k < mono.size(); ++k) exps[k] = mono[k];
      trace.push_back(nlohmann::json::array({exps, c.to_string()}));
    }
    const nlohmann::json j = {{"key", key}, {"sets", data.sets}, {"trace", trace}};
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    const auto target = path_for(key);
    const auto tmp = target.string() + ".tmp." + std::to_string(::getpid());
    {
      std::ofstream out(tmp);
      if (!out) return;  // a read-only cache only costs time
      out << j.dump() << '\n';
    }
    std::filesystem::rename(tmp, target, ec);
  }

 private:
  std::filesystem::path dir_;
};

}  // namespace flagstar
