#include <algorithm>
#include <set>

#include "framesift/parallel.hpp"
#include "framesift/sampling.hpp"

namespace framesift::sampling {

namespace {

using metrics::MetricKind;

MetricKind pixel_kind(Family family) {
  switch (family) {
    case Family::likelihood_ratio: return MetricKind::likelihood_ratio;
    case Family::histogram_comparison: return MetricKind::histogram_difference;
    case Family::structural_similarity: return MetricKind::structural_similarity;
    default: break;
  }
  throw SamplingError(std::string(to_string(family)) + " is not a pixel metric family");
}

bool is_pixel(Family f) {
  return f == Family::likelihood_ratio || f == Family::histogram_comparison || f == Family::structural_similarity;
}

// Series needed for one video, keyed by metric kind (pixel) or model id
// (cosine).
struct VideoSeries {
  std::map<MetricKind, PairwiseMetricSeries> pixel;
  std::map<std::string, PairwiseMetricSeries> cosine;
};

VideoSeries compute_video_series(const corpus::VideoRecord& video, std::span<const corpus::FrameRef> frames,
                                 const std::set<MetricKind>& kinds, const std::set<std::string>& models,
                                 const RunInputs& inputs) {
  VideoSeries out;
  if (frames.size() < 2) return out;
  if (!kinds.empty()) {
    std::vector<RasterFrame> rasters;
    rasters.reserve(frames.size());
    for (const auto& f : frames) rasters.push_back(corpus::load_raster(f.uri));
    for (const auto kind : kinds) out.pixel.emplace(kind, compute_pixel_series(video.video_id, rasters, kind));
  }
  for (const auto& model : models) {
    if (inputs.embeddings == nullptr) throw SamplingError("cosine_similarity sampling needs an embedding source");
    const auto vectors = frame_vectors(*inputs.embeddings, frames, model);
    out.cosine.emplace(model, compute_cosine_series(video.video_id, vectors, model));
  }
  return out;
}

SampleResult apply(const SamplingMethodSpec& method, const corpus::VideoRecord& video, const VideoSeries& series,
                   const RunInputs& inputs) {
  SampleResult r;
  r.video_id = video.video_id;
  r.method = method;
  const int n = video.frame_count_1fps;

  if (method.family == Family::uniform_stride) {
    r.selected = uniform_stride(n, method.stride);
    return r;
  }
  if (method.family == Family::shot_boundary) {
    if (inputs.shot_boundaries == nullptr) throw SamplingError("shot_boundary sampling needs a boundary file");
    auto it = inputs.shot_boundaries->find(video.video_id);
    if (it == inputs.shot_boundaries->end()) throw SamplingError("no shot boundaries for video " + video.video_id);
    auto mapping = map_shot_boundaries(it->second, video.fps_original, n);
    r.selected = std::move(mapping.selected);
    r.warnings = std::move(mapping.warnings);
    return r;
  }

  const auto* s = std::get_if<StaticThreshold>(&method.threshold);
  if (n < 2) {
    r.selected = {0};
    if (s) r.threshold_used = s->value;
    return r;
  }
  const PairwiseMetricSeries& values = method.family == Family::cosine_similarity
                                           ? series.cosine.at(method.model_id)
                                           : series.pixel.at(pixel_kind(method.family));
  double threshold = 0.0;
  if (s) {
    threshold = s->value;
  } else if (std::holds_alternative<DynamicMedian>(method.threshold)) {
    threshold = dynamic_threshold_median(values.values);
  } else {
    const auto& mr = std::get<DynamicMeanReward>(method.threshold);
    threshold = dynamic_threshold_mean_reward(values.values, mr.c, mr.k);
  }
  r.selected = select_frames(values.values, threshold, method.direction);
  r.threshold_used = threshold;
  if (inputs.keep_series) r.series = values;
  return r;
}

}  // namespace

std::vector<std::vector<SampleResult>> run_methods(const corpus::Corpus& corpus,
                                                   std::span<const SamplingMethodSpec> methods,
                                                   const RunInputs& inputs) {
  std::set<MetricKind> kinds;
  std::set<std::string> models;
  for (const auto& m : methods) {
    m.validate();
    if (is_pixel(m.family)) kinds.insert(pixel_kind(m.family));
    if (m.family == Family::cosine_similarity) models.insert(m.model_id);
  }

  const auto& videos = corpus.videos();
  std::vector<std::vector<SampleResult>> out(methods.size(), std::vector<SampleResult>(videos.size()));
  parallel_for(videos.size(), inputs.jobs, [&](std::size_t v) {
    const auto& video = videos[v];
    try {
      const auto series = compute_video_series(video, corpus.frames(video.video_id), kinds, models, inputs);
      for (std::size_t m = 0; m < methods.size(); ++m) out[m][v] = apply(methods[m], video, series, inputs);
    } catch (const SamplingError& e) {
      const std::string what = e.what();
      if (what.find(video.video_id) != std::string::npos) throw;
      throw SamplingError("video " + video.video_id + ": " + what);
    } catch (const metrics::MetricError& e) {
      throw SamplingError("video " + video.video_id + ": " + e.what());
    }
  });
  return out;
}

std::vector<SampleResult> run_method(const corpus::Corpus& corpus, const SamplingMethodSpec& method,
                                     const RunInputs& inputs) {
  return std::move(run_methods(corpus, std::span(&method, 1), inputs).front());
}

}  // namespace framesift::sampling
