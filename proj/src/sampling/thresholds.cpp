#include <algorithm>
#include <cmath>
#include <numeric>

#include "framesift/sampling.hpp"

namespace framesift::sampling {

double dynamic_threshold_median(std::span<const double> values) {
  if (values.empty()) throw SamplingError("median threshold of an empty series");
  std::vector<double> v(values.begin(), values.end());
  const auto mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return (lower + upper) / 2.0;
}

double dynamic_threshold_mean_reward(std::span<const double> values, double c, double k) {
  if (values.empty()) throw SamplingError("mean-reward threshold of an empty series");
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  if (std::abs(mean) < 1e-9) throw SamplingError("mean-reward threshold is undefined for a series with mean 0");
  return mean + c + (1.0 / mean) / k;
}

}  // namespace framesift::sampling
