#include <cmath>

#include "framesift/sampling.hpp"

namespace framesift::sampling {

namespace {

void check_finite(const PairwiseMetricSeries& s) {
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    if (!std::isfinite(s.values[i])) {
      throw SamplingError("video " + s.video_id + ": non-finite " + std::string(metrics::to_string(s.kind)) +
                          " between frames " + std::to_string(i) + " and " + std::to_string(i + 1));
    }
  }
}

metrics::MetricValue pixel_metric(const RasterFrame& a, const RasterFrame& b, metrics::MetricKind kind) {
  switch (kind) {
    case metrics::MetricKind::likelihood_ratio: return metrics::likelihood_ratio(a, b);
    case metrics::MetricKind::histogram_difference: return metrics::histogram_difference(a, b);
    case metrics::MetricKind::structural_similarity: return metrics::structural_similarity(a, b);
    case metrics::MetricKind::cosine_similarity: break;
  }
  throw SamplingError("cosine similarity needs embeddings, not pixels");
}

}  // namespace

PairwiseMetricSeries compute_pixel_series(const std::string& video_id, std::span<const RasterFrame> frames,
                                          metrics::MetricKind kind) {
  if (frames.empty()) throw SamplingError("video " + video_id + " has no frames");
  PairwiseMetricSeries s{video_id, kind, {}, {}};
  s.values.reserve(frames.size() - 1);
  for (std::size_t i = 0; i + 1 < frames.size(); ++i) s.values.push_back(pixel_metric(frames[i], frames[i + 1], kind).value);
  check_finite(s);
  return s;
}

PairwiseMetricSeries compute_cosine_series(const std::string& video_id, std::span<const std::vector<float>> vectors,
                                           const std::string& model_id) {
  if (vectors.empty()) throw SamplingError("video " + video_id + " has no frames");
  PairwiseMetricSeries s{video_id, metrics::MetricKind::cosine_similarity, model_id, {}};
  s.values.reserve(vectors.size() - 1);
  for (std::size_t i = 0; i + 1 < vectors.size(); ++i) {
    if (vectors[i].size() != vectors[i + 1].size()) {
      throw SamplingError("video " + video_id + ": embedding dim changes between frames " + std::to_string(i) +
                          " and " + std::to_string(i + 1));
    }
    s.values.push_back(metrics::cosine_similarity(std::span<const float>(vectors[i]), vectors[i + 1]).value);
  }
  check_finite(s);
  return s;
}

std::vector<float> concat_embeddings(std::span<const float> f1, std::span<const float> f2) {
  if (f1.empty() || f2.empty()) throw InvalidArgument("concat_embeddings: empty input");
  std::vector<float> out;
  out.reserve(f1.size() + f2.size());
  out.insert(out.end(), f1.begin(), f1.end());
  out.insert(out.end(), f2.begin(), f2.end());
  return out;
}

std::vector<std::vector<float>> frame_vectors(const embeddings::EmbeddingProvider& provider,
                                              std::span<const corpus::FrameRef> frames, const std::string& model_id) {
  std::vector<std::vector<float>> out;
  out.reserve(frames.size());
  if (model_id == "combined_resnet152_clip") {
    const auto r152 = provider.get_frame_embeddings(frames, "resnet152");
    const auto clip = provider.get_frame_embeddings(frames, "clip");
    for (std::size_t i = 0; i < frames.size(); ++i) out.push_back(concat_embeddings(r152[i].vector, clip[i].vector));
    return out;
  }
  for (auto& rec : provider.get_frame_embeddings(frames, model_id)) out.push_back(std::move(rec.vector));
  return out;
}

}  // namespace framesift::sampling
