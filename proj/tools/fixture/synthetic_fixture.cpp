#include "synthetic_fixture.hpp"

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "json.hpp"

#include "framesift/binary_io.hpp"
#include "framesift/corpus.hpp"
#include "framesift/embeddings.hpp"

namespace framesift::fixture {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kVideos = 6;
constexpr int kFrames = 8;
constexpr int kWidth = 32;
constexpr int kHeight = 24;
constexpr int kFps = 30;
constexpr std::array<int, kVideos> kShot1 = {4, 5, 3, 4, 6, 2};
constexpr std::array<const char*, kVideos> kCategory = {"animals", "animals", "travel", "travel", "cooking", "cooking"};
constexpr std::size_t kDog = 60;
constexpr std::size_t kBoat = 61;
constexpr float kStoredScale = 2.5f;

struct Range {
  int from, to;
};
const std::array<std::array<Range, 2>, kVideos> kFrameRanges = {{
    {{{0, 1}, {5, 6}}},
    {{{2, 3}, {6, 7}}},
    {{{1, 2}, {3, 3}}},
    {{{1, 1}, {6, 7}}},
    {{{3, 4}, {7, 7}}},
    {{{0, 1}, {4, 5}}},
}};

std::string video_id(int v) { return "v" + std::to_string(v); }
int shot_of(int v, int f) { return f < kShot1[v] ? 0 : 1; }
std::size_t shot_axis(int v, int s) { return static_cast<std::size_t>(2 * v + s); }
std::size_t frame_axis(int v, int f) { return static_cast<std::size_t>(12 + 8 * v + f); }

RasterFrame shot_image(int v, int s) {
  std::uint32_t state = static_cast<std::uint32_t>(1000 + 2 * v + s);
  std::vector<std::uint8_t> px(static_cast<std::size_t>(kWidth) * kHeight * 3);
  for (auto& p : px) {
    state = state * 1664525u + 1013904223u;
    p = static_cast<std::uint8_t>(((state >> 24) >> 2) + (s == 1 ? 128 : 0));
  }
  return RasterFrame(kWidth, kHeight, std::move(px));
}

double eps2(const std::string& model, int s) {
  if (model == "clip") return 0.01;
  if (model == "resnet50") return s == 0 ? 0.01 : 1.0 / 7.0;
  return 1.0 / 0.82 - 1.0;
}

std::vector<float> stored(const std::vector<double>& u) {
  double ss = 0.0;
  for (const double x : u) ss += x * x;
  const double n = std::sqrt(ss);
  std::vector<float> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = static_cast<float>(kStoredScale * (u[i] / n));
  return out;
}

std::vector<float> frame_vector(const std::string& model, int v, int f) {
  const int s = shot_of(v, f);
  std::vector<double> u(model == "clip" ? 512 : 2048, 0.0);
  u[shot_axis(v, s)] = 1.0;
  u[frame_axis(v, f)] = std::sqrt(eps2(model, s));
  if (v == 1 && f == 6) u[kDog] += 1.0;
  if (v == 3 && f == 1) u[kBoat] += 1.0;
  if (model == "clip" && s == 1 && v == 0) u[kDog] += 0.5;
  if (model == "clip" && s == 1 && v == 2) u[kBoat] += 0.5;
  return stored(u);
}

}  // namespace

FixturePaths write_synthetic_fixture(const fs::path& root) {
  FixturePaths p;
  p.root = root;
  p.corpus_manifest = root / "corpus.json";
  p.embeddings_dir = root / "embeddings";
  p.video_queries = root / "video_queries.json";
  p.frame_queries = root / "frame_annotations.json";
  p.shot_boundaries = root / "shot_boundaries.json";
  fs::create_directories(p.embeddings_dir);

  ordered_json manifest = ordered_json::array();
  ordered_json shots = ordered_json::object();
  for (int v = 0; v < kVideos; ++v) {
    const auto id = video_id(v);
    const auto dir = root / "frames" / id;
    fs::create_directories(dir);
    const std::array<RasterFrame, 2> images = {shot_image(v, 0), shot_image(v, 1)};
    for (int f = 0; f < kFrames; ++f) {
      corpus::save_raster(dir / (id + "_" + std::to_string(f) + ".png"), images[static_cast<std::size_t>(shot_of(v, f))]);
    }
    manifest.push_back({{"video_id", id},
                        {"category", kCategory[static_cast<std::size_t>(v)]},
                        {"duration_s", kFrames},
                        {"fps_original", std::to_string(kFps)},
                        {"frames_dir", "frames/" + id}});
    std::vector<std::int64_t> xs = {kFps * kShot1[v] + 7};
    if (v == 5) xs.push_back(300);  // past the end; clamped by the mapper
    shots[id] = xs;
  }
  write_text_file(p.corpus_manifest, manifest.dump(1) + "\n");
  write_text_file(p.shot_boundaries, shots.dump(1) + "\n");

  for (const std::string model : {"clip", "resnet50", "resnet152"}) {
    std::vector<embeddings::EmbeddingRecord> records;
    for (int v = 0; v < kVideos; ++v) {
      for (int f = 0; f < kFrames; ++f) {
        records.push_back({embeddings::FrameKey{video_id(v), f}, model, frame_vector(model, v, f)});
      }
    }
    embeddings::write_embedding_file(p.embeddings_dir / (model + "_frames"), records);
  }

  // Text side: clip only.
  std::vector<embeddings::EmbeddingRecord> texts;
  ordered_json video_queries = ordered_json::array();
  auto add_text = [&](const std::string& qid, const std::string& text, std::vector<double> u) {
    texts.push_back({embeddings::QueryKey{qid, text}, "clip", stored(u)});
  };
  for (int v = 0; v < kVideos; ++v) {
    std::vector<double> u(512, 0.0);
    u[shot_axis(v, 0)] = 1.0;
    const auto qid = "vq_" + video_id(v);
    const auto text = "opening scene of video " + video_id(v);
    add_text(qid, text, u);
    video_queries.push_back({{"query_id", qid}, {"video_id", video_id(v)}, {"text", text}});
  }
  {
    std::vector<double> u(512, 0.0);
    u[kDog] = 1.0;
    u[shot_axis(1, 1)] = 0.3;
    add_text("vq_dog", "a dog runs through the scene", u);
    video_queries.push_back({{"query_id", "vq_dog"}, {"video_id", "v1"}, {"text", "a dog runs through the scene"}});
  }
  {
    std::vector<double> u(512, 0.0);
    u[kBoat] = 1.0;
    u[shot_axis(3, 0)] = 0.3;
    add_text("vq_boat", "a boat passes the harbour", u);
    video_queries.push_back({{"query_id", "vq_boat"}, {"video_id", "v3"}, {"text", "a boat passes the harbour"}});
  }

  ordered_json annotations = ordered_json::array();
  for (int v = 0; v < kVideos; ++v) {
    ordered_json descriptions = ordered_json::array();
    ordered_json indices = ordered_json::array();
    for (std::size_t i = 0; i < 2; ++i) {
      const auto r = kFrameRanges[static_cast<std::size_t>(v)][i];
      std::vector<double> u(512, 0.0);
      u[shot_axis(v, shot_of(v, r.from))] = 1.0;
      for (int f = r.from; f <= r.to; ++f) u[frame_axis(v, f)] += 0.5;
      const auto text = "moment " + std::to_string(i) + " of video " + video_id(v);
      add_text(video_id(v) + "#" + std::to_string(i), text, u);
      descriptions.push_back(text);
      indices.push_back({r.from, r.to});
    }
    annotations.push_back({{"video_id", video_id(v)}, {"text_descriptions", descriptions}, {"frame_indices", indices}});
  }
  embeddings::write_embedding_file(p.embeddings_dir / "clip_text", texts);
  write_text_file(p.video_queries, video_queries.dump(1) + "\n");
  write_text_file(p.frame_queries, annotations.dump(1) + "\n");
  return p;
}

}  // namespace framesift::fixture
