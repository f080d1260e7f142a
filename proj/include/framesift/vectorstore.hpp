#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "framesift/error.hpp"

namespace framesift::vectorstore {

class VectorStoreError : public Error {
 public:
  explicit VectorStoreError(const std::string& message) : Error("vectorstore", message) {}
};

struct IndexConfig {
  std::size_t dim = 512;
  int m = 32;
  int ef_construction = 100;
  int ef_search = 1000;
  std::uint64_t seed = 42;

  void validate() const;
};

struct FrameVectorEntry {
  std::int64_t entry_id = 0;
  std::string video_id;
  int frame_index = 0;
  std::string category;
};

struct SearchHit {
  FrameVectorEntry entry;
  double score = 0.0;  // inner product of unit vectors, clamped to [-1, 1]
};

inline constexpr double kNormTolerance = 1e-4;

// Inner product with eight independent accumulators; the single kernel used
// by both the graph and the flat scan so their scores agree bit for bit.
float dot(const float* a, const float* b, std::size_t dim);

// Entries plus row-major unit vectors. entry_id is the insertion position.
class VectorTable {
 public:
  explicit VectorTable(std::size_t dim = 512) : dim_(dim) {}

  // Rejects wrong dims, norms outside 1 +- 1e-4 and repeated
  // (video_id, frame_index) keys. Returns the assigned entry_id.
  std::int64_t add(std::string video_id, int frame_index, std::string category, std::span<const float> unit_vector);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const FrameVectorEntry& entry(std::size_t i) const { return entries_[i]; }
  const std::vector<FrameVectorEntry>& entries() const { return entries_; }
  const float* vector(std::size_t i) const { return data_.data() + i * dim_; }
  const std::vector<float>& data() const { return data_; }

 private:
  friend class HnswIndex;

  std::size_t dim_;
  std::vector<FrameVectorEntry> entries_;
  std::vector<float> data_;
  std::map<std::pair<std::string, int>, std::size_t> keys_;
};

// Brute-force ranking by score descending, ties by ascending entry_id.
std::vector<SearchHit> exact_search(const VectorTable& table, std::span<const float> query, std::size_t k);

// Hierarchical navigable small world graph over inner product. Build is
// single-threaded and deterministic for a given seed; const methods are safe
// to call concurrently.
class HnswIndex {
 public:
  HnswIndex() = default;

  static HnswIndex build(VectorTable table, const IndexConfig& config);

  // Up to k hits. When k >= size() the result is the exact full ranking.
  // ef defaults to config().ef_search and is raised to k if smaller.
  std::vector<SearchHit> search(std::span<const float> query, std::size_t k, std::optional<int> ef = {}) const;

  std::size_t size() const { return table_.size(); }
  const VectorTable& table() const { return table_; }
  const IndexConfig& config() const { return config_; }
  int max_level() const { return max_level_; }
  std::size_t payload_bytes() const { return table_.size() * table_.dim() * sizeof(float); }
  const std::vector<std::uint32_t>& neighbors(std::size_t node, int level) const { return links_[node][level]; }

  // Versioned container: magic, version, config, entry table, vector
  // payload, adjacency, SHA-256 trailer.
  std::vector<std::byte> serialize() const;
  // expected_dim, when given, must equal the stored dimension.
  static HnswIndex deserialize(std::span<const std::byte> bytes, std::optional<std::size_t> expected_dim = {});
  void save(const std::filesystem::path& path) const;
  static HnswIndex load(const std::filesystem::path& path, std::optional<std::size_t> expected_dim = {});

 private:
  struct Candidate {
    float dist;
    std::uint32_t id;
    bool operator<(const Candidate& o) const { return dist < o.dist || (dist == o.dist && id < o.id); }
    bool operator>(const Candidate& o) const { return o < *this; }
  };

  float distance(const float* q, std::uint32_t id) const;
  float distance(std::uint32_t a, std::uint32_t b) const;
  std::vector<Candidate> search_layer(const float* q, std::vector<Candidate> entry_points, std::size_t ef,
                                      int level) const;
  std::vector<Candidate> select_neighbors(std::vector<Candidate> candidates, std::size_t m) const;
  void insert(std::uint32_t id, int level);
  std::size_t max_degree(int level) const;

  VectorTable table_;
  IndexConfig config_;
  std::vector<int> levels_;
  std::vector<std::vector<std::vector<std::uint32_t>>> links_;  // [node][level] -> neighbour ids
  std::int64_t entry_point_ = -1;
  int max_level_ = -1;
};

}  // namespace framesift::vectorstore
