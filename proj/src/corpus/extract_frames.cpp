#include <cmath>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/videoio.hpp>

#include "framesift/corpus.hpp"

namespace framesift::corpus {

std::vector<FrameRef> extract_frames_1fps(const std::filesystem::path& video_uri,
                                          const std::filesystem::path& out_dir, std::string video_id) {
  if (video_id.empty()) video_id = video_uri.stem().string();
  cv::VideoCapture cap(video_uri.string());
  if (!cap.isOpened()) throw IngestError("cannot decode video " + video_uri.string());
  const double fps = cap.get(cv::CAP_PROP_FPS);

  std::filesystem::create_directories(out_dir);
  std::vector<FrameRef> frames;
  cv::Mat frame;
  long decoded = 0;
  int next_point = 0;
  while (cap.read(frame)) {
    // Prefer the container's constant rate; fall back to stream timestamps.
    const double t = fps > 0.0 ? static_cast<double>(decoded) / fps : cap.get(cv::CAP_PROP_POS_MSEC) / 1000.0;
    ++decoded;
    if (t + 1e-9 < next_point) continue;
    const int index = static_cast<int>(frames.size());
    const auto path = out_dir / (video_id + "_" + std::to_string(index) + ".png");
    if (!cv::imwrite(path.string(), frame)) throw IngestError("cannot write frame " + path.string());
    frames.push_back({video_id, index, path.string()});
    // Indices stay gapless even if the stream skips whole seconds.
    next_point = static_cast<int>(std::floor(t + 1e-9)) + 1;
  }
  if (decoded == 0) throw IngestError("video " + video_uri.string() + " contains no decodable frames");
  return frames;
}

}  // namespace framesift::corpus
