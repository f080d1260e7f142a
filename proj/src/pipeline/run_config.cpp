#include <set>

#include "framesift/pipeline.hpp"

namespace framesift::pipeline {

namespace fs = std::filesystem;

std::vector<std::string> default_method_grid() {
  std::vector<std::string> grid;
  for (const char* s : {"1", "2", "3", "5"}) grid.push_back(std::string("uniform_stride_") + s);
  for (const char* t : {"1.5", "2.0", "2.5", "3.0", "5.0", "dm"}) grid.push_back(std::string("likelihood_ratio_") + t);
  for (const char* t : {"0.005", "0.01", "0.015", "0.02", "dm"}) grid.push_back(std::string("histogram_comparison_") + t);
  for (const char* t : {"0.2", "0.3", "0.4", "0.5", "dm"}) grid.push_back(std::string("structural_similarity_") + t);
  for (const auto& model : sampling::kCosineModels) {
    for (const char* t : {"0.8", "0.85", "0.9", "0.95", "dm"}) grid.push_back("cosine_similarity_" + model + "_" + t);
  }
  grid.emplace_back("shot_boundary");
  return grid;
}

std::vector<sampling::SamplingMethodSpec> resolve_methods(const RunConfig& config) {
  const auto names = config.methods.empty() ? default_method_grid() : config.methods;
  std::vector<sampling::SamplingMethodSpec> specs;
  std::set<std::string> seen;
  for (const auto& n : names) {
    auto spec = sampling::SamplingMethodSpec::parse(n);
    if (!seen.insert(spec.name()).second) throw ValidationError("method " + spec.name() + " is listed twice");
    specs.push_back(std::move(spec));
  }
  return specs;
}

fs::path samples_path(const RunConfig& config, const std::string& method) {
  return config.out / "samples" / (method + ".jsonl");
}
fs::path index_path(const RunConfig& config, const std::string& method) {
  return config.out / "index" / (method + ".hnsw");
}
fs::path eval_path(const RunConfig& config, const std::string& method) {
  return config.out / "eval" / (method + ".json");
}
fs::path report_dir(const RunConfig& config) { return config.out / "report"; }
fs::path stamp_path(const fs::path& artifact) { return artifact.string() + ".stamp.json"; }

std::unique_ptr<embeddings::EmbeddingProvider> make_provider(const RunConfig& config) {
  if (!config.embeddings_dir.empty()) {
    return std::make_unique<embeddings::FileEmbeddingProvider>(
        embeddings::FileEmbeddingProvider::from_directory(config.embeddings_dir));
  }
  if (!config.service_url.empty()) {
    embeddings::ServiceOptions options;
    options.max_parallel = std::max(1, config.jobs);
    return std::make_unique<embeddings::ServiceEmbeddingProvider>(config.service_url, options);
  }
  return nullptr;
}

}  // namespace framesift::pipeline
