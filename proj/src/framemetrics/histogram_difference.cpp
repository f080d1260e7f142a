#include <array>
#include <cstdlib>

#include "framesift/framemetrics.hpp"

namespace framesift::metrics {
namespace {

using Histogram = std::array<int, kHistogramBins>;

Histogram region_histogram(const RasterFrame& f, const RegionBox& box, int channel) {
  Histogram h{};
  for (int y = box.y0; y < box.y0 + box.height; ++y) {
    for (int x = box.x0; x < box.x0 + box.width; ++x) {
      ++h[f.at(x, y, channel) * kHistogramBins / 256];
    }
  }
  return h;
}

}  // namespace

MetricValue histogram_difference(const RasterFrame& a, const RasterFrame& b, RegionGrid grid) {
  if (!a.same_shape(b)) throw MetricError("histogram_difference: frame dimensions differ");
  const auto boxes = grid.boxes(a.width(), a.height());
  double region_sum = 0.0;
  for (const auto& box : boxes) {
    const double norm = static_cast<double>(kHistogramBins) * box.height * box.width;
    double channel_sum = 0.0;
    for (int c = 0; c < RasterFrame::kChannels; ++c) {
      const auto ha = region_histogram(a, box, c);
      const auto hb = region_histogram(b, box, c);
      long raw = 0;
      for (int j = 0; j < kHistogramBins; ++j) raw += std::abs(ha[j] - hb[j]);
      channel_sum += static_cast<double>(raw) / norm;
    }
    region_sum += channel_sum / RasterFrame::kChannels;
  }
  return {region_sum / static_cast<double>(boxes.size()), MetricKind::histogram_difference};
}

}  // namespace framesift::metrics
