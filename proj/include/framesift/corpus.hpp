#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "framesift/error.hpp"
#include "framesift/raster.hpp"

namespace framesift::corpus {

class CorpusError : public Error {
 public:
  explicit CorpusError(const std::string& message) : Error("corpus", message) {}
};

class IngestError : public Error {
 public:
  explicit IngestError(const std::string& message) : Error("ingest", message) {}
};

// Positive frame rate such as 30/1 or 30000/1001.
struct Rational {
  std::int64_t num = 1;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;

  // Accepts "30", "29.97" and "30000/1001".
  static Rational parse(std::string_view text);
  static Rational from_double(double v);
};

struct VideoRecord {
  std::string video_id;
  std::string category;
  int duration_s = 0;
  Rational fps_original;
  int frame_count_1fps = 0;
  std::filesystem::path frames_dir;
};

struct FrameRef {
  std::string video_id;
  int frame_index = 0;
  std::string uri;
};

struct VideoQuery {
  std::string query_id;
  std::string video_id;
  std::string text;
};

struct FrameQuery {
  std::string query_id;
  std::string video_id;
  std::string text;
  int frame_from = 0;
  int frame_to = 0;
};

// Video inventory at 1 FPS. Immutable once built; safe for concurrent reads.
class Corpus {
 public:
  // Reads corpus.json (array of {video_id, category, duration_s,
  // fps_original, frames_dir}); relative frames_dir entries resolve against
  // the manifest's directory.
  static Corpus load_manifest(const std::filesystem::path& manifest);

  // Registers a video with its frames; frames must be exactly 0..N-1 (any
  // order) with N >= 1. Sets record.frame_count_1fps to N.
  void add_video(VideoRecord record, std::vector<FrameRef> frames);

  const std::vector<VideoRecord>& videos() const { return videos_; }
  const VideoRecord* find(std::string_view video_id) const;
  const VideoRecord& video(std::string_view video_id) const;
  std::span<const FrameRef> frames(std::string_view video_id) const;
  std::size_t total_frames() const;
  std::vector<std::string> categories() const;

 private:
  std::vector<VideoRecord> videos_;
  std::vector<std::vector<FrameRef>> frames_;
  std::map<std::string, std::size_t, std::less<>> by_id_;
};

// Lists `<video_id>_<index>.<png|jpg|jpeg>` files in `dir` ordered by index.
// Throws CorpusError when the indices are not a gapless 0..N-1 sequence.
std::vector<FrameRef> scan_frames_dir(const std::filesystem::path& dir, const std::string& video_id);

// Splits `annotations` into `partitions` contiguous near-equal splits (the
// first len % partitions splits get one extra item) and returns the first
// element of every non-empty split.
std::vector<std::string> systematic_sample_annotations(std::span<const std::string> annotations,
                                                       int partitions = 4);

// JSON array of {query_id, video_id, text}. Only checks that text is
// non-empty; unknown videos are handled by the evaluator.
std::vector<VideoQuery> load_video_queries(const std::filesystem::path& path);

// Annotator output: [{video_id, text_descriptions:[...], frame_indices:[[a,b],...]}].
// Every record is validated against `corpus`. Query ids are "<video_id>#<i>".
std::vector<FrameQuery> load_frame_queries(const std::filesystem::path& path, const Corpus& corpus);
std::vector<FrameQuery> parse_frame_queries(std::string_view json_text, const Corpus& corpus);

// Image files are decoded to RGB.
RasterFrame load_raster(const std::filesystem::path& path);
void save_raster(const std::filesystem::path& path, const RasterFrame& frame);

// Decodes `video_uri` and writes one PNG per whole-second sample point to
// out_dir as `<video_id>_<index>.png`. Sample point k takes the first
// decoded frame whose timestamp is >= k seconds; a clip whose last frame is
// at t seconds yields floor(t) + 1 frames.
std::vector<FrameRef> extract_frames_1fps(const std::filesystem::path& video_uri,
                                          const std::filesystem::path& out_dir,
                                          std::string video_id = {});

}  // namespace framesift::corpus
