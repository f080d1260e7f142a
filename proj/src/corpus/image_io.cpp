#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "framesift/corpus.hpp"

namespace framesift::corpus {

RasterFrame load_raster(const std::filesystem::path& path) {
  cv::Mat bgr = cv::imread(path.string(), cv::IMREAD_COLOR);
  if (bgr.empty()) throw IngestError("cannot decode image " + path.string());
  cv::Mat rgb;
  cv::cvtColor(bgr, rgb, cv::COLOR_BGR2RGB);
  if (!rgb.isContinuous()) rgb = rgb.clone();
  std::vector<std::uint8_t> pixels(rgb.data, rgb.data + rgb.total() * rgb.elemSize());
  return {rgb.cols, rgb.rows, std::move(pixels)};
}

void save_raster(const std::filesystem::path& path, const RasterFrame& frame) {
  cv::Mat rgb(frame.height(), frame.width(), CV_8UC3, const_cast<std::uint8_t*>(frame.pixels().data()));
  cv::Mat bgr;
  cv::cvtColor(rgb, bgr, cv::COLOR_RGB2BGR);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  if (!cv::imwrite(path.string(), bgr)) throw IngestError("cannot write image " + path.string());
}

}  // namespace framesift::corpus
