#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "framesift/error.hpp"

namespace framesift {

// 8-bit, 3-channel frame in interleaved row-major order (RGB as produced
// by the corpus loader).
class RasterFrame {
 public:
  static constexpr int kChannels = 3;

  RasterFrame() = default;
  RasterFrame(int width, int height, std::vector<std::uint8_t> pixels)
      : width_(width), height_(height), pixels_(std::move(pixels)) {
    if (width <= 0 || height <= 0) throw InvalidArgument("raster dimensions must be positive");
    if (pixels_.size() != static_cast<std::size_t>(width) * height * kChannels) {
      throw InvalidArgument("raster pixel buffer has " + std::to_string(pixels_.size()) +
                            " bytes, expected " +
                            std::to_string(static_cast<std::size_t>(width) * height * kChannels));
    }
  }

  static RasterFrame filled(int width, int height, std::uint8_t value) {
    return {width, height,
            std::vector<std::uint8_t>(static_cast<std::size_t>(width) * height * kChannels, value)};
  }

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return pixels_.empty(); }

  std::uint8_t at(int x, int y, int c) const {
    return pixels_[(static_cast<std::size_t>(y) * width_ + x) * kChannels + c];
  }
  std::uint8_t& at(int x, int y, int c) {
    return pixels_[(static_cast<std::size_t>(y) * width_ + x) * kChannels + c];
  }

  const std::vector<std::uint8_t>& pixels() const { return pixels_; }

  bool same_shape(const RasterFrame& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

}  // namespace framesift
