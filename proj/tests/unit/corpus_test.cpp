#include <gtest/gtest.h>

#include <opencv2/core.hpp>
#include <opencv2/videoio.hpp>

#include "framesift/corpus.hpp"
#include "lcg.hpp"
#include "temp_dir.hpp"

namespace fc = framesift::corpus;
using framesift::testing::TempDir;
using framesift::testing::write_file;

namespace {

void write_frames(const std::filesystem::path& dir, const std::string& id, int n) {
  for (int i = 0; i < n; ++i) {
    fc::save_raster(dir / (id + "_" + std::to_string(i) + ".png"),
                    framesift::testing::lcg_frame(static_cast<std::uint32_t>(i), 8, 8));
  }
}

fc::Corpus small_corpus() {
  fc::Corpus c;
  std::vector<fc::FrameRef> frames;
  for (int i = 0; i < 5; ++i) frames.push_back({"a", i, ""});
  c.add_video({"a", "animals", 5, {30, 1}, 0, {}}, frames);
  return c;
}

// Writes an MJPG clip with `frames` frames at `fps`; returns false when the
// encoder is unavailable.
bool write_clip(const std::filesystem::path& path, int frames, double fps) {
  cv::VideoWriter w(path.string(), cv::VideoWriter::fourcc('M', 'J', 'P', 'G'), fps, cv::Size(32, 24));
  if (!w.isOpened()) return false;
  for (int i = 0; i < frames; ++i) {
    cv::Mat m(24, 32, CV_8UC3, cv::Scalar(i % 256, (i * 7) % 256, 40));
    w.write(m);
  }
  return true;
}

}  // namespace

TEST(Rational, ParsesForms) {
  const auto a = fc::Rational::parse("30000/1001");
  EXPECT_EQ(a.num, 30000);
  EXPECT_EQ(a.den, 1001);
  const auto b = fc::Rational::parse("25");
  EXPECT_EQ(b.num, 25);
  EXPECT_EQ(b.den, 1);
  EXPECT_EQ(b.str(), "25");
  const auto c = fc::Rational::parse("60/2");
  EXPECT_EQ(c.num, 30);
  EXPECT_EQ(c.den, 1);
  EXPECT_NEAR(fc::Rational::parse("29.97").value(), 29.97, 1e-12);
}

TEST(Rational, RejectsInvalid) {
  for (const char* s : {"", "abc", "0", "-5", "30/0", "0/1", "30/", "1/2/3"}) {
    EXPECT_THROW(fc::Rational::parse(s), fc::CorpusError) << s;
  }
}

TEST(Corpus, AddVideoRequiresGaplessFrames) {
  fc::Corpus c;
  EXPECT_THROW(c.add_video({"v", "x", 1, {}, 0, {}}, {}), fc::CorpusError);
  EXPECT_THROW(c.add_video({"v", "x", 3, {}, 0, {}}, {{"v", 0, ""}, {"v", 2, ""}}), fc::CorpusError);
  c.add_video({"v", "x", 2, {}, 0, {}}, {{"v", 1, ""}, {"v", 0, ""}});
  EXPECT_EQ(c.video("v").frame_count_1fps, 2);
  EXPECT_EQ(c.frames("v")[0].frame_index, 0);
  EXPECT_THROW(c.add_video({"v", "x", 1, {}, 0, {}}, {{"v", 0, ""}}), fc::CorpusError);
  EXPECT_THROW(c.video("nope"), fc::CorpusError);
  EXPECT_EQ(c.find("nope"), nullptr);
}

TEST(Corpus, LoadsManifestWithRelativeDirs) {
  TempDir tmp;
  write_frames(tmp / "frames/v1", "v1", 3);
  write_frames(tmp / "frames/v2", "v2", 2);
  write_file(tmp / "corpus.json", R"([
    {"video_id":"v1","category":"travel","duration_s":3,"fps_original":"30000/1001","frames_dir":"frames/v1"},
    {"video_id":"v2","category":"animals","duration_s":2,"fps_original":25,"frames_dir":"frames/v2"}])");
  const auto c = fc::Corpus::load_manifest(tmp / "corpus.json");
  ASSERT_EQ(c.videos().size(), 2u);
  EXPECT_EQ(c.total_frames(), 5u);
  EXPECT_EQ(c.video("v1").fps_original.den, 1001);
  EXPECT_EQ(c.categories(), (std::vector<std::string>{"animals", "travel"}));
  const auto f = fc::load_raster(c.frames("v1")[2].uri);
  EXPECT_EQ(f.pixels(), framesift::testing::lcg_frame(2, 8, 8).pixels());
}

TEST(Corpus, ManifestErrors) {
  TempDir tmp;
  write_file(tmp / "bad.json", "{not json");
  EXPECT_THROW(fc::Corpus::load_manifest(tmp / "bad.json"), fc::CorpusError);
  write_file(tmp / "obj.json", "{}");
  EXPECT_THROW(fc::Corpus::load_manifest(tmp / "obj.json"), fc::CorpusError);
  write_file(tmp / "missing.json", R"([{"video_id":"v","category":"c","duration_s":1,"fps_original":30}])");
  EXPECT_THROW(fc::Corpus::load_manifest(tmp / "missing.json"), fc::CorpusError);
}

TEST(ScanFramesDir, DetectsGapsAndIgnoresOtherFiles) {
  TempDir tmp;
  write_frames(tmp.path(), "v", 3);
  write_file(tmp / "notes.txt", "x");
  write_file(tmp / "other_0.png", "x");
  write_file(tmp / "v_x.png", "x");
  EXPECT_EQ(fc::scan_frames_dir(tmp.path(), "v").size(), 3u);
  std::filesystem::remove(tmp / "v_1.png");
  EXPECT_THROW(fc::scan_frames_dir(tmp.path(), "v"), fc::CorpusError);
  EXPECT_THROW(fc::scan_frames_dir(tmp / "absent", "v"), fc::CorpusError);
}

TEST(SystematicSample, FirstElementOfEachSplit) {
  const std::vector<std::string> ten = {"0", "1", "2", "3", "4", "5", "6", "7", "8", "9"};
  // Splits of 3,3,2,2.
  EXPECT_EQ(fc::systematic_sample_annotations(ten), (std::vector<std::string>{"0", "3", "6", "8"}));
  const std::vector<std::string> two = {"a", "b"};
  EXPECT_EQ(fc::systematic_sample_annotations(two), two);
  EXPECT_TRUE(fc::systematic_sample_annotations(std::span<const std::string>{}).empty());
  EXPECT_THROW(fc::systematic_sample_annotations(two, 0), framesift::InvalidArgument);
}

TEST(SystematicSample, AtMostPartitionsDistinctItems) {
  std::vector<std::string> items;
  for (int n = 0; n < 40; ++n) {
    const auto out = fc::systematic_sample_annotations(items, 4);
    EXPECT_EQ(out.size(), std::min<std::size_t>(items.size(), 4));
    if (!items.empty()) {
      EXPECT_EQ(out.front(), items.front());
    }
    items.push_back(std::to_string(n));
  }
}

TEST(FrameQueries, ParsesAndValidates) {
  const auto c = small_corpus();
  const auto q = fc::parse_frame_queries(
      R"([{"video_id":"a","text_descriptions":["x","y"],"frame_indices":[[0,1],[4,4]]}])", c);
  ASSERT_EQ(q.size(), 2u);
  EXPECT_EQ(q[1].query_id, "a#1");
  EXPECT_EQ(q[1].frame_from, 4);
  EXPECT_EQ(q[1].frame_to, 4);

  const char* bad[] = {
      R"([{"video_id":"zz","text_descriptions":["x"],"frame_indices":[[0,1]]}])",
      R"([{"video_id":"a","text_descriptions":["x"],"frame_indices":[[0,5]]}])",
      R"([{"video_id":"a","text_descriptions":["x"],"frame_indices":[[3,2]]}])",
      R"([{"video_id":"a","text_descriptions":["x"],"frame_indices":[[-1,2]]}])",
      R"([{"video_id":"a","text_descriptions":["x","y"],"frame_indices":[[0,1]]}])",
      R"([{"video_id":"a","text_descriptions":[""],"frame_indices":[[0,1]]}])",
      R"([{"video_id":"a","text_descriptions":["x"],"frame_indices":[[0]]}])",
      R"({"video_id":"a"})",
      "[",
  };
  for (const char* s : bad) EXPECT_THROW(fc::parse_frame_queries(s, c), framesift::ValidationError) << s;
}

TEST(VideoQueries, LoadsAndRejectsEmptyText) {
  TempDir tmp;
  write_file(tmp / "q.json", R"([{"query_id":"q1","video_id":"a","text":"a cat"}])");
  const auto q = fc::load_video_queries(tmp / "q.json");
  ASSERT_EQ(q.size(), 1u);
  EXPECT_EQ(q[0].text, "a cat");
  write_file(tmp / "e.json", R"([{"query_id":"q1","video_id":"a","text":""}])");
  EXPECT_THROW(fc::load_video_queries(tmp / "e.json"), framesift::ValidationError);
}

TEST(ExtractFrames, OneFramePerWholeSecond) {
  TempDir tmp;
  struct Case {
    int frames;
    int expected;
  };
  // At 10 fps the last frame of a 197-frame clip sits at 19.6 s.
  for (const Case c : {Case{197, 20}, Case{10, 1}, Case{200, 20}, Case{1, 1}}) {
    const auto clip = tmp / ("clip" + std::to_string(c.frames) + ".avi");
    if (!write_clip(clip, c.frames, 10.0)) GTEST_SKIP() << "MJPG encoder unavailable";
    const auto out = tmp / ("out" + std::to_string(c.frames));
    const auto refs = fc::extract_frames_1fps(clip, out, "vid");
    EXPECT_EQ(static_cast<int>(refs.size()), c.expected) << c.frames;
    EXPECT_EQ(fc::scan_frames_dir(out, "vid").size(), refs.size());
  }
}

TEST(ExtractFrames, UndecodableInput) {
  TempDir tmp;
  write_file(tmp / "junk.avi", "not a video");
  EXPECT_THROW(fc::extract_frames_1fps(tmp / "junk.avi", tmp / "out"), fc::IngestError);
}
