#include "framesift/framemetrics.hpp"

namespace framesift::metrics {
namespace {

struct Moments {
  double mean = 0.0;
  double variance = 0.0;  // population
};

Moments region_moments(const RasterFrame& f, const RegionBox& box, int channel) {
  const double n = box.area();
  double sum = 0.0;
  for (int y = box.y0; y < box.y0 + box.height; ++y) {
    for (int x = box.x0; x < box.x0 + box.width; ++x) sum += f.at(x, y, channel);
  }
  const double mean = sum / n;
  double ss = 0.0;
  for (int y = box.y0; y < box.y0 + box.height; ++y) {
    for (int x = box.x0; x < box.x0 + box.width; ++x) {
      const double d = f.at(x, y, channel) - mean;
      ss += d * d;
    }
  }
  return {mean, ss / n};
}

}  // namespace

MetricValue likelihood_ratio(const RasterFrame& a, const RasterFrame& b, RegionGrid grid) {
  if (!a.same_shape(b)) throw MetricError("likelihood_ratio: frame dimensions differ");
  const auto boxes = grid.boxes(a.width(), a.height());
  double total = 0.0;
  for (const auto& box : boxes) {
    for (int c = 0; c < RasterFrame::kChannels; ++c) {
      const auto ma = region_moments(a, box, c);
      const auto mb = region_moments(b, box, c);
      double sa = ma.variance;
      double sb = mb.variance;
      if (sa == 0.0 || sb == 0.0) sa = sb = 1.0;
      const double half_diff = (ma.mean - mb.mean) / 2.0;
      const double num = (sa + sb) / 2.0 + half_diff * half_diff;
      total += (num * num) / (sa * sb);
    }
  }
  return {total / static_cast<double>(boxes.size() * RasterFrame::kChannels),
          MetricKind::likelihood_ratio};
}

}  // namespace framesift::metrics
