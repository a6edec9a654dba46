#pragma once

#include <memory>

#include "flagstar/cache.hpp"
#include "flagstar/quantization.hpp"

namespace flagstar {

struct PipelineOptions {
  unsigned jobs = 1;
  bool use_cache = false;
  std::filesystem::path cache_dir = BasisCache::default_dir();
};

/// Everything needed to quantize up to degree D: R to 2D, D to D, T to 2D.
class Pipeline {
 public:
  Pipeline(FlagConfig config, int degree, const PipelineOptions& options = {})
      : degree_(degree), jobs_(options.jobs) {
    if (degree < 0) throw std::invalid_argument("degree must be non-negative");
    model_ = std::make_unique<FlagModel>(std::move(config));
    const int top = 2 * degree;
    const std::string key = BasisCache::key(model_->config(), top, top);
    const BasisCache cache(options.cache_dir);
    std::optional<CachedBases> hit;
    if (options.use_cache) hit = cache.load(key, 2 * model_->m());
    if (hit && static_cast<int>(hit->sets.size()) == top + 1) {
      cs_ = std::make_unique<ClassicalSide>(*model_, hit->sets);
      dm_ = std::make_unique<DModuleSide>(*cs_, degree);
      trace_ = std::make_unique<TraceFunctional>(*model_, top, std::move(hit->trace));
      cache_hit_ = true;
    } else {
      cs_ = std::make_unique<ClassicalSide>(*model_, top);
      dm_ = std::make_unique<DModuleSide>(*cs_, degree);
      trace_ = std::make_unique<TraceFunctional>(*dm_, top);
      if (options.use_cache) cache.store(key, CachedBases{cs_->all_sets(), trace_->table()});
    }
    q_ = std::make_unique<Quantization>(*dm_, *trace_, jobs_);
  }

  int degree() const { return degree_; }
  unsigned jobs() const { return jobs_; }
  bool cache_hit() const { return cache_hit_; }
  const FlagModel& model() const { return *model_; }
  const ClassicalSide& classical() const { return *cs_; }
  const DModuleSide& dmodule() const { return *dm_; }
  const TraceFunctional& trace() const { return *trace_; }
  const Quantization& quantization() const { return *q_; }

 private:
  int degree_;
  unsigned jobs_;
  bool cache_hit_ = false;
  std::unique_ptr<FlagModel> model_;
  std::unique_ptr<ClassicalSide> cs_;
  std::unique_ptr<DModuleSide> dm_;
  std::unique_ptr<TraceFunctional> trace_;
  std::unique_ptr<Quantization> q_;
};

}  // namespace flagstar
