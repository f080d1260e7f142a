#include <cstdint>
#include <vector>

#include "framesift/framemetrics.hpp"

namespace framesift::metrics {
namespace {

// Summed-area table over integer samples; window sums stay exact because
// every product of two 8-bit values fits comfortably in int64.
class IntegralImage {
 public:
  IntegralImage(int width, int height) : w_(width + 1), table_(static_cast<std::size_t>(w_) * (height + 1), 0) {}

  template <typename Sample>
  void build(int width, int height, Sample&& sample) {
    for (int y = 0; y < height; ++y) {
      std::int64_t row = 0;
      for (int x = 0; x < width; ++x) {
        row += sample(x, y);
        cell(x + 1, y + 1) = cell(x + 1, y) + row;
      }
    }
  }

  std::int64_t window(int x0, int y0, int size) const {
    return cell(x0 + size, y0 + size) - cell(x0, y0 + size) - cell(x0 + size, y0) + cell(x0, y0);
  }

 private:
  std::int64_t& cell(int x, int y) { return table_[static_cast<std::size_t>(y) * w_ + x]; }
  std::int64_t cell(int x, int y) const { return table_[static_cast<std::size_t>(y) * w_ + x]; }

  int w_;
  std::vector<std::int64_t> table_;
};

double channel_ssim(const RasterFrame& a, const RasterFrame& b, int c, const SsimParams& p) {
  const int w = a.width();
  const int h = a.height();
  IntegralImage sx(w, h), sy(w, h), sxx(w, h), syy(w, h), sxy(w, h);
  sx.build(w, h, [&](int x, int y) { return std::int64_t{a.at(x, y, c)}; });
  sy.build(w, h, [&](int x, int y) { return std::int64_t{b.at(x, y, c)}; });
  sxx.build(w, h, [&](int x, int y) { return std::int64_t{a.at(x, y, c)} * a.at(x, y, c); });
  syy.build(w, h, [&](int x, int y) { return std::int64_t{b.at(x, y, c)} * b.at(x, y, c); });
  sxy.build(w, h, [&](int x, int y) { return std::int64_t{a.at(x, y, c)} * b.at(x, y, c); });

  const int win = p.window;
  const double np = static_cast<double>(win) * win;
  const double cov_norm = np / (np - 1.0);
  const double c1 = (p.k1 * p.data_range) * (p.k1 * p.data_range);
  const double c2 = (p.k2 * p.data_range) * (p.k2 * p.data_range);

  // Windows fully inside the frame are exactly the cropped interior of the
  // full-size SSIM map.
  double sum = 0.0;
  long count = 0;
  for (int y0 = 0; y0 + win <= h; ++y0) {
    for (int x0 = 0; x0 + win <= w; ++x0) {
      const double ux = sx.window(x0, y0, win) / np;
      const double uy = sy.window(x0, y0, win) / np;
      const double uxx = sxx.window(x0, y0, win) / np;
      const double uyy = syy.window(x0, y0, win) / np;
      const double uxy = sxy.window(x0, y0, win) / np;
      const double vx = cov_norm * (uxx - ux * ux);
      const double vy = cov_norm * (uyy - uy * uy);
      const double vxy = cov_norm * (uxy - ux * uy);
      const double num = (2.0 * ux * uy + c1) * (2.0 * vxy + c2);
      const double den = (ux * ux + uy * uy + c1) * (vx + vy + c2);
      sum += num / den;
      ++count;
    }
  }
  return sum / static_cast<double>(count);
}

}  // namespace

MetricValue structural_similarity(const RasterFrame& a, const RasterFrame& b, SsimParams params) {
  if (!a.same_shape(b)) throw MetricError("structural_similarity: frame dimensions differ");
  if (params.window < 2 || params.window % 2 == 0) {
    throw MetricError("structural_similarity: window must be odd and >= 3");
  }
  if (a.width() < params.window || a.height() < params.window) {
    throw MetricError("structural_similarity: frame " + std::to_string(a.width()) + "x" +
                      std::to_string(a.height()) + " is smaller than the " +
                      std::to_string(params.window) + "x" + std::to_string(params.window) + " window");
  }
  double total = 0.0;
  for (int c = 0; c < RasterFrame::kChannels; ++c) total += channel_ssim(a, b, c, params);
  return {total / RasterFrame::kChannels, MetricKind::structural_similarity};
}

}  // namespace framesift::metrics
