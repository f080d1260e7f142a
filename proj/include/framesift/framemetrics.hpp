#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "framesift/error.hpp"
#include "framesift/raster.hpp"

// Pairwise frame difference / similarity measurements. All functions are
// pure and thread-safe; intensities are promoted to double on entry.
namespace framesift::metrics {

enum class MetricKind {
  likelihood_ratio,
  histogram_difference,
  structural_similarity,
  cosine_similarity,
};

std::string_view to_string(MetricKind kind);
MetricKind metric_kind_from_string(std::string_view name);

struct MetricValue {
  double value = 0.0;
  MetricKind kind = MetricKind::likelihood_ratio;
};

class MetricError : public Error {
 public:
  explicit MetricError(const std::string& message) : Error("metric", message) {}
};

// Rectangle in pixel coordinates, [x0, x0+width) x [y0, y0+height).
struct RegionBox {
  int x0 = 0;
  int y0 = 0;
  int width = 0;
  int height = 0;

  int area() const { return width * height; }
};

// rows x cols tiling anchored at the top-left corner. Every region is
// floor(width/cols) x floor(height/rows); trailing remainder pixels on the
// right and bottom edges belong to no region.
struct RegionGrid {
  int rows = 4;
  int cols = 4;

  std::vector<RegionBox> boxes(int frame_width, int frame_height) const;
};

inline constexpr int kHistogramBins = 64;

// Mean over regions x channels of
//   [ (s1+s2)/2 + ((m1-m2)/2)^2 ]^2 / (s1*s2)
// with population variances s and means m. When either variance of a
// region/channel is zero both are replaced by 1.
MetricValue likelihood_ratio(const RasterFrame& a, const RasterFrame& b, RegionGrid grid = {});

// Per region and channel: sum_j |H_a(j) - H_b(j)| over 64 bins (bin =
// intensity / 4), divided by 64 * region area. Channels are averaged per
// region, then regions are averaged. Range [0, 2/64].
MetricValue histogram_difference(const RasterFrame& a, const RasterFrame& b, RegionGrid grid = {});

struct SsimParams {
  int window = 7;
  double k1 = 0.01;
  double k2 = 0.03;
  double data_range = 255.0;
};

// Mean SSIM with a uniform window and sample (N-1) covariance, averaged over
// the valid interior (the window radius is cropped from every edge) and
// then over channels. This is the scikit-image default parameterisation.
MetricValue structural_similarity(const RasterFrame& a, const RasterFrame& b, SsimParams params = {});

MetricValue cosine_similarity(std::span<const double> u, std::span<const double> v);
MetricValue cosine_similarity(std::span<const float> u, std::span<const float> v);

}  // namespace framesift::metrics
