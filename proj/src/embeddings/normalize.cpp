#include <cmath>

#include "framesift/embeddings.hpp"

namespace framesift::embeddings {

std::size_t known_dim(std::string_view model_id) {
  if (model_id == "clip") return 512;
  if (model_id == "resnet50" || model_id == "resnet152") return 2048;
  return 0;
}

namespace {

template <typename T>
double norm_of(std::span<const T> v) {
  double ss = 0.0;
  for (const auto x : v) ss += static_cast<double>(x) * static_cast<double>(x);
  return std::sqrt(ss);
}

}  // namespace

double l2_norm(std::span<const float> v) { return norm_of(v); }

std::vector<double> l2_normalize(std::span<const double> v) {
  const double n = norm_of(v);
  if (!(n > 0.0)) throw InvalidArgument("l2_normalize: zero vector");
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / n;
  return out;
}

std::vector<float> l2_normalize(std::span<const float> v) {
  const double n = norm_of(v);
  if (!(n > 0.0)) throw InvalidArgument("l2_normalize: zero vector");
  std::vector<float> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = static_cast<float>(static_cast<double>(v[i]) / n);
  return out;
}

}  // namespace framesift::embeddings
