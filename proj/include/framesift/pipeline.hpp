#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "framesift/corpus.hpp"
#include "framesift/embeddings.hpp"
#include "framesift/error.hpp"
#include "framesift/eval.hpp"
#include "framesift/sampling.hpp"
#include "framesift/vectorstore.hpp"

namespace framesift::pipeline {

// Missing, stale or foreign stage inputs/outputs.
class StageError : public Error {
 public:
  explicit StageError(const std::string& message) : Error("stage", message) {}
};

struct RunConfig {
  std::filesystem::path corpus;
  std::vector<std::string> methods;  // empty: default grid
  std::filesystem::path embeddings_dir;
  std::string service_url;
  std::filesystem::path video_queries;
  std::filesystem::path frame_queries;
  std::filesystem::path shot_boundaries;
  vectorstore::IndexConfig index;
  std::vector<int> ks = eval::kDefaultKs;
  int jobs = 1;
  std::filesystem::path out = "out";
  bool force = false;
  std::string index_model = "clip";
};

// stride {1,2,3,5}; likelihood {1.5,2.0,2.5,3.0,5.0,dm}; histogram
// {0.005,0.01,0.015,0.02,dm}; SSIM {0.2,0.3,0.4,0.5,dm}; cosine per model
// {0.8,0.85,0.9,0.95,dm}; shot_boundary.
std::vector<std::string> default_method_grid();

// Parsed method list (default grid when empty); names must be unique.
std::vector<sampling::SamplingMethodSpec> resolve_methods(const RunConfig& config);

// Artifact locations under config.out.
std::filesystem::path samples_path(const RunConfig& config, const std::string& method);
std::filesystem::path index_path(const RunConfig& config, const std::string& method);
std::filesystem::path eval_path(const RunConfig& config, const std::string& method);
std::filesystem::path report_dir(const RunConfig& config);
std::filesystem::path stamp_path(const std::filesystem::path& artifact);

// Embedding source from the config: files win over the service; nullptr
// when neither is configured.
std::unique_ptr<embeddings::EmbeddingProvider> make_provider(const RunConfig& config);

// Each stage writes one artifact per method plus a `.stamp.json` holding a
// SHA-256 key over (stage, method, stage settings, upstream artifact
// hashes). Inputs whose stamp does not match the current configuration and
// outputs left by a different configuration are refused unless
// config.force is set.
std::vector<std::filesystem::path> run_sample(const RunConfig& config);
std::vector<std::filesystem::path> run_index(const RunConfig& config);
std::vector<std::filesystem::path> run_eval(const RunConfig& config);
std::vector<std::filesystem::path> run_report(const RunConfig& config);

std::vector<vectorstore::SearchHit> dump_neighbors(const RunConfig& config, const std::string& method,
                                                   const std::string& query_text, std::size_t k);

}  // namespace framesift::pipeline
