#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <regex>
#include <set>

#include "json.hpp"

#include "framesift/binary_io.hpp"
#include "framesift/corpus.hpp"

namespace framesift::corpus {

namespace fs = std::filesystem;
using nlohmann::json;

std::string Rational::str() const {
  return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

Rational Rational::from_double(double v) {
  if (!(v > 0.0) || !std::isfinite(v)) throw CorpusError("frame rate must be positive");
  constexpr std::int64_t kScale = 1000000;
  std::int64_t num = std::llround(v * kScale);
  std::int64_t den = kScale;
  const auto g = std::gcd(num, den);
  return {num / g, den / g};
}

Rational Rational::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
      throw CorpusError("invalid frame rate '" + std::string(text) + "'");
    }
    return from_double(v);
  }
  std::int64_t num = 0, den = 0;
  auto a = std::from_chars(text.data(), text.data() + slash, num);
  auto b = std::from_chars(text.data() + slash + 1, text.data() + text.size(), den);
  if (a.ec != std::errc{} || b.ec != std::errc{} || b.ptr != text.data() + text.size() || num <= 0 || den <= 0) {
    throw CorpusError("invalid frame rate '" + std::string(text) + "'");
  }
  const auto g = std::gcd(num, den);
  return {num / g, den / g};
}

void Corpus::add_video(VideoRecord record, std::vector<FrameRef> frames) {
  if (record.video_id.empty()) throw CorpusError("video_id must be non-empty");
  if (by_id_.contains(record.video_id)) throw CorpusError("duplicate video_id " + record.video_id);
  if (frames.empty()) throw CorpusError("video " + record.video_id + " has no frames");
  std::sort(frames.begin(), frames.end(),
            [](const FrameRef& a, const FrameRef& b) { return a.frame_index < b.frame_index; });
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (frames[i].video_id != record.video_id) {
      throw CorpusError("frame of video " + frames[i].video_id + " registered under " + record.video_id);
    }
    if (frames[i].frame_index != static_cast<int>(i)) {
      throw CorpusError("video " + record.video_id + ": frame indices are not a gapless 0..N-1 sequence (missing " +
                        std::to_string(i) + ")");
    }
  }
  record.frame_count_1fps = static_cast<int>(frames.size());
  by_id_.emplace(record.video_id, videos_.size());
  videos_.push_back(std::move(record));
  frames_.push_back(std::move(frames));
}

const VideoRecord* Corpus::find(std::string_view video_id) const {
  auto it = by_id_.find(video_id);
  return it == by_id_.end() ? nullptr : &videos_[it->second];
}

const VideoRecord& Corpus::video(std::string_view video_id) const {
  if (const auto* v = find(video_id)) return *v;
  throw CorpusError("unknown video_id " + std::string(video_id));
}

std::span<const FrameRef> Corpus::frames(std::string_view video_id) const {
  auto it = by_id_.find(video_id);
  if (it == by_id_.end()) throw CorpusError("unknown video_id " + std::string(video_id));
  return frames_[it->second];
}

std::size_t Corpus::total_frames() const {
  std::size_t n = 0;
  for (const auto& f : frames_) n += f.size();
  return n;
}

std::vector<std::string> Corpus::categories() const {
  std::set<std::string> cats;
  for (const auto& v : videos_) cats.insert(v.category);
  return {cats.begin(), cats.end()};
}

std::vector<FrameRef> scan_frames_dir(const fs::path& dir, const std::string& video_id) {
  if (!fs::is_directory(dir)) throw CorpusError("frames directory not found: " + dir.string());
  static const std::set<std::string> kExtensions{".png", ".jpg", ".jpeg"};
  std::vector<FrameRef> frames;
  const std::string prefix = video_id + "_";
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    auto ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (!kExtensions.contains(ext)) continue;
    const auto stem = entry.path().stem().string();
    if (!stem.starts_with(prefix)) continue;
    const std::string_view digits(stem.data() + prefix.size(), stem.size() - prefix.size());
    int index = -1;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), index);
    if (digits.empty() || ec != std::errc{} || ptr != digits.data() + digits.size() || index < 0) continue;
    frames.push_back({video_id, index, entry.path().string()});
  }
  std::sort(frames.begin(), frames.end(),
            [](const FrameRef& a, const FrameRef& b) { return a.frame_index < b.frame_index; });
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (frames[i].frame_index != static_cast<int>(i)) {
      throw CorpusError("frames of " + video_id + " in " + dir.string() +
                        " are not a gapless 0..N-1 sequence (index " + std::to_string(i) +
                        (frames[i].frame_index < static_cast<int>(i) ? " duplicated)" : " missing)"));
    }
  }
  return frames;
}

Corpus Corpus::load_manifest(const fs::path& manifest) {
  json doc;
  try {
    doc = json::parse(read_text_file(manifest));
  } catch (const json::exception& e) {
    throw CorpusError("cannot parse corpus manifest " + manifest.string() + ": " + e.what());
  }
  if (!doc.is_array()) throw CorpusError("corpus manifest must be a JSON array");
  const auto base = manifest.parent_path();
  Corpus corpus;
  for (const auto& item : doc) {
    try {
      VideoRecord rec;
      rec.video_id = item.at("video_id").get<std::string>();
      rec.category = item.at("category").get<std::string>();
      rec.duration_s = item.at("duration_s").get<int>();
      const auto& fps = item.at("fps_original");
      rec.fps_original = fps.is_string() ? Rational::parse(fps.get<std::string>())
                                         : Rational::from_double(fps.get<double>());
      fs::path dir = item.at("frames_dir").get<std::string>();
      rec.frames_dir = dir.is_absolute() ? dir : base / dir;
      auto frames = scan_frames_dir(rec.frames_dir, rec.video_id);
      corpus.add_video(std::move(rec), std::move(frames));
    } catch (const json::exception& e) {
      throw CorpusError("malformed corpus manifest entry in " + manifest.string() + ": " + e.what());
    }
  }
  return corpus;
}

std::vector<std::string> systematic_sample_annotations(std::span<const std::string> annotations, int partitions) {
  if (partitions < 1) throw InvalidArgument("partitions must be >= 1");
  std::vector<std::string> out;
  const std::size_t n = annotations.size();
  const std::size_t p = static_cast<std::size_t>(partitions);
  const std::size_t base = n / p;
  const std::size_t extra = n % p;
  std::size_t start = 0;
  for (std::size_t split = 0; split < p; ++split) {
    const std::size_t size = base + (split < extra ? 1 : 0);
    if (size > 0) out.push_back(annotations[start]);
    start += size;
  }
  return out;
}

}  // namespace framesift::corpus
