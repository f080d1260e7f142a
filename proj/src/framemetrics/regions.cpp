#include <string>

#include "framesift/framemetrics.hpp"

namespace framesift::metrics {

std::string_view to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::likelihood_ratio: return "likelihood_ratio";
    case MetricKind::histogram_difference: return "histogram_difference";
    case MetricKind::structural_similarity: return "structural_similarity";
    case MetricKind::cosine_similarity: return "cosine_similarity";
  }
  return "unknown";
}

MetricKind metric_kind_from_string(std::string_view name) {
  for (auto kind : {MetricKind::likelihood_ratio, MetricKind::histogram_difference,
                    MetricKind::structural_similarity, MetricKind::cosine_similarity}) {
    if (to_string(kind) == name) return kind;
  }
  throw InvalidArgument("unknown metric kind '" + std::string(name) + "'");
}

std::vector<RegionBox> RegionGrid::boxes(int frame_width, int frame_height) const {
  if (rows <= 0 || cols <= 0) throw MetricError("region grid needs positive rows and cols");
  const int rw = frame_width / cols;
  const int rh = frame_height / rows;
  if (rw == 0 || rh == 0) {
    throw MetricError("frame " + std::to_string(frame_width) + "x" + std::to_string(frame_height) +
                      " is too small for a " + std::to_string(rows) + "x" + std::to_string(cols) +
                      " region grid");
  }
  std::vector<RegionBox> out;
  out.reserve(static_cast<std::size_t>(rows) * cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) out.push_back({c * rw, r * rh, rw, rh});
  }
  return out;
}

}  // namespace framesift::metrics
