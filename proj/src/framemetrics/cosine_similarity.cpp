#include <cmath>

#include "framesift/framemetrics.hpp"

namespace framesift::metrics {
namespace {

template <typename T>
MetricValue cosine_impl(std::span<const T> u, std::span<const T> v) {
  if (u.size() != v.size()) {
    throw MetricError("cosine_similarity: dimension mismatch (" + std::to_string(u.size()) + " vs " +
                      std::to_string(v.size()) + ")");
  }
  if (u.empty()) throw MetricError("cosine_similarity: empty vectors");
  double dot = 0.0, uu = 0.0, vv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double a = u[i];
    const double b = v[i];
    dot += a * b;
    uu += a * a;
    vv += b * b;
  }
  if (uu == 0.0 || vv == 0.0) throw MetricError("cosine_similarity: zero vector");
  return {dot / (std::sqrt(uu) * std::sqrt(vv)), MetricKind::cosine_similarity};
}

}  // namespace

MetricValue cosine_similarity(std::span<const double> u, std::span<const double> v) {
  return cosine_impl(u, v);
}

MetricValue cosine_similarity(std::span<const float> u, std::span<const float> v) {
  return cosine_impl(u, v);
}

}  // namespace framesift::metrics
