#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "framesift/corpus.hpp"
#include "framesift/embeddings.hpp"
#include "framesift/error.hpp"
#include "framesift/framemetrics.hpp"

namespace framesift::sampling {

class SamplingError : public Error {
 public:
  explicit SamplingError(const std::string& message) : Error("sampling", message) {}
};

enum class Family {
  uniform_stride,
  likelihood_ratio,
  histogram_comparison,
  structural_similarity,
  cosine_similarity,
  shot_boundary,
};

enum class Direction { select_if_ge, select_if_le };

std::string_view to_string(Family family);
Direction default_direction(Family family);

struct StaticThreshold {
  double value = 0.0;
};
struct DynamicMedian {};
// mean + c + (1/mean)/k
struct DynamicMeanReward {
  double c = 0.01;
  double k = 1000.0;
};

// monostate for families without a threshold (stride, shot boundary).
using ThresholdMode = std::variant<std::monostate, StaticThreshold, DynamicMedian, DynamicMeanReward>;

inline const std::vector<std::string> kCosineModels = {"clip", "resnet50", "resnet152", "combined_resnet152_clip"};

struct SamplingMethodSpec {
  Family family = Family::uniform_stride;
  std::string model_id;  // cosine family only
  ThresholdMode threshold;
  int stride = 0;  // uniform_stride only
  Direction direction = Direction::select_if_ge;

  static SamplingMethodSpec uniform(int stride);
  static SamplingMethodSpec pixel(Family family, ThresholdMode threshold);
  static SamplingMethodSpec cosine(std::string model_id, ThresholdMode threshold);
  static SamplingMethodSpec shots();

  // Canonical names: uniform_stride_2, likelihood_ratio_2.5,
  // histogram_comparison_dm, structural_similarity_0.3,
  // cosine_similarity_clip_0.85, cosine_similarity_resnet50_dm,
  // shot_boundary. Integral thresholds print with ".0".
  std::string name() const;
  // Inverse of name(); "autoshot" is accepted for shot_boundary.
  static SamplingMethodSpec parse(std::string_view name);
  // Throws SamplingError when the family/threshold/direction combination is
  // not one the method grid allows.
  void validate() const;

  bool operator==(const SamplingMethodSpec&) const;
};

std::string format_threshold(double value);

struct PairwiseMetricSeries {
  std::string video_id;
  metrics::MetricKind kind = metrics::MetricKind::likelihood_ratio;
  std::string model_id;
  // values[i] compares frame i and frame i + 1.
  std::vector<double> values;
};

struct SampleResult {
  std::string video_id;
  SamplingMethodSpec method;
  std::vector<int> selected;
  std::optional<double> threshold_used;
  std::optional<PairwiseMetricSeries> series;
  std::vector<std::string> warnings;
};

// --- Series -----------------------------------------------------------------

PairwiseMetricSeries compute_pixel_series(const std::string& video_id, std::span<const RasterFrame> frames,
                                          metrics::MetricKind kind);
// One vector per frame in frame order; consistent dimension required.
PairwiseMetricSeries compute_cosine_series(const std::string& video_id,
                                           std::span<const std::vector<float>> vectors,
                                           const std::string& model_id);

// [f1; f2], values copied unchanged.
std::vector<float> concat_embeddings(std::span<const float> f1, std::span<const float> f2);

// Frame vectors for `model_id`, resolving combined_resnet152_clip into
// concat(resnet152, clip) per frame.
std::vector<std::vector<float>> frame_vectors(const embeddings::EmbeddingProvider& provider,
                                              std::span<const corpus::FrameRef> frames,
                                              const std::string& model_id);

// --- Thresholds and selection ----------------------------------------------

// Median; mean of the middle two for even lengths. Throws on empty input.
double dynamic_threshold_median(std::span<const double> values);
// mean + c + (1/mean)/k. Throws on empty input or |mean| < 1e-9.
double dynamic_threshold_mean_reward(std::span<const double> values, double c = 0.01, double k = 1000.0);

// Frame 0 plus every i + 1 with values[i] >= threshold (select_if_ge) or
// <= threshold (select_if_le). Exact comparisons.
std::vector<int> select_frames(std::span<const double> values, double threshold, Direction direction);

// {0, S, 2S, ...} below frame_count.
std::vector<int> uniform_stride(int frame_count, int stride);

struct ShotMapping {
  std::vector<int> selected;
  std::vector<std::string> warnings;
};

// Boundaries are frame numbers at the original rate. Each x contributes
// floor(x / fps) and, when in range, the following index. Indices past the
// end are clamped to frame_count - 1 with a warning.
ShotMapping map_shot_boundaries(std::span<const std::int64_t> boundaries, corpus::Rational fps, int frame_count);

// {"<video_id>": [x, ...], ...}
using ShotBoundaryTable = std::map<std::string, std::vector<std::int64_t>, std::less<>>;
ShotBoundaryTable load_shot_boundaries(const std::filesystem::path& path);

// --- Orchestration ----------------------------------------------------------

struct RunInputs {
  const embeddings::EmbeddingProvider* embeddings = nullptr;  // cosine family
  const ShotBoundaryTable* shot_boundaries = nullptr;         // shot_boundary family
  int jobs = 1;
  bool keep_series = false;
};

// Result[m][v] is method m on corpus.videos()[v]. Videos run in parallel;
// each series is computed once per video and shared by every method that
// needs it.
std::vector<std::vector<SampleResult>> run_methods(const corpus::Corpus& corpus,
                                                   std::span<const SamplingMethodSpec> methods,
                                                   const RunInputs& inputs);
std::vector<SampleResult> run_method(const corpus::Corpus& corpus, const SamplingMethodSpec& method,
                                     const RunInputs& inputs);

// JSON lines: {video_id, method_name, threshold_used, selected}.
std::string to_jsonl(std::span<const SampleResult> results);
std::vector<SampleResult> parse_jsonl(std::string_view text);

}  // namespace framesift::sampling
