#pragma once

#include <chrono>
#include <compare>
#include <filesystem>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "framesift/corpus.hpp"
#include "framesift/error.hpp"

namespace framesift::embeddings {

struct FrameKey {
  std::string video_id;
  int frame_index = 0;

  auto operator<=>(const FrameKey&) const = default;
};

// Text-side key; `text` is carried so file-backed providers can answer
// lookups by query text.
struct QueryKey {
  std::string query_id;
  std::string text;

  auto operator<=>(const QueryKey&) const = default;
};

using EmbeddingKey = std::variant<FrameKey, QueryKey>;

std::string describe(const EmbeddingKey& key);

struct EmbeddingRecord {
  EmbeddingKey key;
  std::string model_id;
  std::vector<float> vector;

  std::size_t dim() const { return vector.size(); }
};

/// Dimension the well-known encoders produce (clip 512, resnet50/152 2048),
/// or 0 for unknown model ids.
std::size_t known_dim(std::string_view model_id);

// L2 normalisation. Computation is in double; the float overload rounds the
// result once. Throws InvalidArgument for zero (or empty) vectors.
std::vector<double> l2_normalize(std::span<const double> v);
std::vector<float> l2_normalize(std::span<const float> v);
double l2_norm(std::span<const float> v);

// ---------------------------------------------------------------------------
// Embedding files: `<name>.embmanifest.json` (model, dim, count, normalised
// flag, ordered keys, payload checksum) + `<name>.embvec` (raw little-endian
// float32, row-major in key order).

class EmbeddingFileError : public Error {
 public:
  enum class Code { checksum_mismatch, truncated_payload, dim_conflict, duplicate_key, malformed };

  EmbeddingFileError(Code code, const std::string& message);
  Code code() const { return code_; }

 private:
  Code code_;
};

std::string_view to_string(EmbeddingFileError::Code code);

struct EmbeddingFile {
  std::string model_id;
  std::size_t dim = 0;
  bool normalized = false;
  std::vector<EmbeddingKey> keys;
  std::vector<float> payload;

  std::size_t count() const { return keys.size(); }
  std::span<const float> row(std::size_t i) const { return {payload.data() + i * dim, dim}; }
  std::vector<EmbeddingRecord> records() const;
};

inline constexpr std::string_view kManifestSuffix = ".embmanifest.json";
inline constexpr std::string_view kPayloadSuffix = ".embvec";

/// `base` is the path without suffix. All records must share model_id and
/// dim and have unique keys.
void write_embedding_file(const std::filesystem::path& base, std::span<const EmbeddingRecord> records,
                          bool normalized = false);

/// Accepts either the base path or the manifest path.
EmbeddingFile read_embedding_file(const std::filesystem::path& base_or_manifest);

// ---------------------------------------------------------------------------
// Providers. Vectors are returned raw; callers normalise where needed.

class MissingKeyError : public Error {
 public:
  MissingKeyError(std::string model_id, std::vector<std::string> missing);
  const std::vector<std::string>& missing() const { return missing_; }

 private:
  std::vector<std::string> missing_;
};

// Network-level failure (connect, timeout, 5xx). Safe to retry.
class TransportError : public Error {
 public:
  explicit TransportError(const std::string& message) : Error("transport", message) {}
  bool retryable() const { return true; }
};

// The service answered but the answer is unusable (4xx, bad JSON, wrong
// count or dim). Retrying will not help.
class ServiceDataError : public Error {
 public:
  explicit ServiceDataError(const std::string& message) : Error("service_data", message) {}
};

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  /// One record per requested frame, in request order.
  virtual std::vector<EmbeddingRecord> get_frame_embeddings(std::span<const corpus::FrameRef> frames,
                                                            std::string_view model_id) const = 0;
  virtual EmbeddingRecord get_text_embedding(std::string_view text, std::string_view model_id) const = 0;

  /// Batched form; the default loops over get_text_embedding.
  virtual std::vector<EmbeddingRecord> get_text_embeddings(std::span<const std::string> texts,
                                                           std::string_view model_id) const;
};

// Read-only after construction; thread-safe.
class FileEmbeddingProvider final : public EmbeddingProvider {
 public:
  FileEmbeddingProvider() = default;

  /// Loads every `*.embmanifest.json` in `dir`.
  static FileEmbeddingProvider from_directory(const std::filesystem::path& dir);

  void add_file(const EmbeddingFile& file);

  std::vector<EmbeddingRecord> get_frame_embeddings(std::span<const corpus::FrameRef> frames,
                                                    std::string_view model_id) const override;
  EmbeddingRecord get_text_embedding(std::string_view text, std::string_view model_id) const override;

  bool has_model(std::string_view model_id) const;
  std::size_t dim(std::string_view model_id) const;
  /// Checksums of every loaded file, for content addressing.
  const std::vector<std::string>& source_digests() const { return digests_; }

 private:
  struct ModelStore {
    std::size_t dim = 0;
    std::map<FrameKey, std::vector<float>> frames;
    std::map<std::string, std::vector<float>, std::less<>> texts;
  };

  std::map<std::string, ModelStore, std::less<>> models_;
  std::vector<std::string> digests_;
};

struct ServiceOptions {
  std::chrono::milliseconds timeout{30000};
  int max_parallel = 4;     // concurrent in-flight requests
  std::size_t batch_size = 64;
  int retries = 2;          // extra attempts after a TransportError
};

// Client for the embedding HTTP service:
//   POST /embed/text  {model_id, texts:[...]} -> {dim, vectors:[[...]]}
//   POST /embed/image {model_id, uris:[...]}  -> {dim, vectors:[[...]]}
class ServiceEmbeddingProvider final : public EmbeddingProvider {
 public:
  explicit ServiceEmbeddingProvider(std::string base_url, ServiceOptions options = {});

  std::vector<EmbeddingRecord> get_frame_embeddings(std::span<const corpus::FrameRef> frames,
                                                    std::string_view model_id) const override;
  EmbeddingRecord get_text_embedding(std::string_view text, std::string_view model_id) const override;
  std::vector<EmbeddingRecord> get_text_embeddings(std::span<const std::string> texts,
                                                   std::string_view model_id) const override;

 private:
  std::vector<std::vector<float>> post_batched(const std::string& endpoint, const std::string& field,
                                               std::span<const std::string> items,
                                               std::string_view model_id) const;
  std::vector<std::vector<float>> post_once(const std::string& endpoint, const std::string& field,
                                            std::span<const std::string> items, std::string_view model_id) const;

  std::string scheme_host_port_;
  std::string path_prefix_;
  ServiceOptions options_;
};

}  // namespace framesift::embeddings
