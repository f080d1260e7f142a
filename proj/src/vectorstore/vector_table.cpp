#include <algorithm>
#include <cmath>
#include <numeric>

#include "framesift/vectorstore.hpp"

namespace framesift::vectorstore {

void IndexConfig::validate() const {
  if (dim == 0) throw VectorStoreError("index dim must be positive");
  if (m < 2) throw VectorStoreError("M must be at least 2");
  if (ef_construction < 1) throw VectorStoreError("efConstruction must be positive");
  if (ef_search < 1) throw VectorStoreError("efSearch must be positive");
}

float dot(const float* a, const float* b, std::size_t dim) {
  float acc[8] = {0, 0, 0, 0, 0, 0, 0, 0};
  std::size_t i = 0;
  for (; i + 8 <= dim; i += 8) {
    for (int j = 0; j < 8; ++j) acc[j] += a[i + j] * b[i + j];
  }
  for (; i < dim; ++i) acc[i % 8] += a[i] * b[i];
  return ((acc[0] + acc[1]) + (acc[2] + acc[3])) + ((acc[4] + acc[5]) + (acc[6] + acc[7]));
}

std::int64_t VectorTable::add(std::string video_id, int frame_index, std::string category,
                              std::span<const float> unit_vector) {
  if (unit_vector.size() != dim_) {
    throw VectorStoreError("vector for (" + video_id + ", " + std::to_string(frame_index) + ") has dim " +
                           std::to_string(unit_vector.size()) + ", index dim is " + std::to_string(dim_));
  }
  double ss = 0.0;
  for (const float x : unit_vector) ss += static_cast<double>(x) * x;
  const double norm = std::sqrt(ss);
  if (!(std::abs(norm - 1.0) <= kNormTolerance)) {
    throw VectorStoreError("vector for (" + video_id + ", " + std::to_string(frame_index) + ") has norm " +
                           std::to_string(norm) + "; index vectors must be L2-normalised");
  }
  auto key = std::make_pair(video_id, frame_index);
  if (keys_.contains(key)) {
    throw VectorStoreError("duplicate frame (" + video_id + ", " + std::to_string(frame_index) + ") in index");
  }
  const auto id = static_cast<std::int64_t>(entries_.size());
  keys_.emplace(std::move(key), entries_.size());
  entries_.push_back({id, std::move(video_id), frame_index, std::move(category)});
  data_.insert(data_.end(), unit_vector.begin(), unit_vector.end());
  return id;
}

std::vector<SearchHit> exact_search(const VectorTable& table, std::span<const float> query, std::size_t k) {
  if (query.size() != table.dim()) {
    throw VectorStoreError("query dim " + std::to_string(query.size()) + " != index dim " + std::to_string(table.dim()));
  }
  const std::size_t n = table.size();
  std::vector<float> scores(n);
  for (std::size_t i = 0; i < n; ++i) scores[i] = std::clamp(dot(query.data(), table.vector(i), table.dim()), -1.0f, 1.0f);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  const auto take = std::min(k, n);
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                    [&](std::size_t a, std::size_t b) { return scores[a] > scores[b] || (scores[a] == scores[b] && a < b); });
  std::vector<SearchHit> hits;
  hits.reserve(take);
  for (std::size_t i = 0; i < take; ++i) {
    hits.push_back({table.entry(order[i]), static_cast<double>(scores[order[i]])});
  }
  return hits;
}

}  // namespace framesift::vectorstore
