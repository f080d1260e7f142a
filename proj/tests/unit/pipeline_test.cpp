#include <gtest/gtest.h>

#include <cstdlib>

#include "fixture/synthetic_fixture.hpp"
#include "fixture_expectations.hpp"
#include "framesift/pipeline.hpp"
#include "json.hpp"
#include "temp_dir.hpp"

namespace pl = framesift::pipeline;
namespace ev = framesift::eval;
using framesift::testing::TempDir;
using framesift::testing::read_file;

namespace {

pl::RunConfig fixture_config(const framesift::fixture::FixturePaths& fx, const std::filesystem::path& out) {
  pl::RunConfig c;
  c.corpus = fx.corpus_manifest;
  c.embeddings_dir = fx.embeddings_dir;
  c.video_queries = fx.video_queries;
  c.frame_queries = fx.frame_queries;
  c.shot_boundaries = fx.shot_boundaries;
  c.out = out;
  return c;
}

void run_all(const pl::RunConfig& c) {
  pl::run_sample(c);
  pl::run_index(c);
  pl::run_eval(c);
  pl::run_report(c);
}

// Every regular file under `dir`, keyed by relative path.
std::map<std::string, std::string> snapshot(const std::filesystem::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) out[std::filesystem::relative(e.path(), dir).string()] = read_file(e.path());
  }
  return out;
}

struct CliResult {
  int status;
  std::string out;
  std::string err;
};

CliResult run_cli(const TempDir& tmp, const std::string& args) {
  const auto out = tmp / "cli.out";
  const auto err = tmp / "cli.err";
  const std::string cmd = std::string(FRAMESIFT_CLI) + " " + args + " > " + out.string() + " 2> " + err.string();
  const int raw = std::system(cmd.c_str());
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, read_file(out), read_file(err)};
}

}  // namespace

TEST(MethodGrid, HasFortyOneUniqueNames) {
  const auto grid = pl::default_method_grid();
  EXPECT_EQ(grid.size(), 41u);
  EXPECT_EQ(std::set<std::string>(grid.begin(), grid.end()).size(), 41u);
  for (const auto& name : grid) EXPECT_TRUE(framesift::testing::fixture_expectations().contains(name)) << name;
  pl::RunConfig c;
  c.methods = {"uniform_stride_1", "uniform_stride_1"};
  EXPECT_THROW(pl::resolve_methods(c), framesift::Error);
  c.methods = {"autoshot", "shot_boundary"};
  EXPECT_THROW(pl::resolve_methods(c), framesift::Error);
}

TEST(Pipeline, FixtureMatchesOracle) {
  TempDir tmp;
  const auto fx = framesift::fixture::write_synthetic_fixture(tmp / "fx");
  const auto c = fixture_config(fx, tmp / "out");
  run_all(c);
  const auto& expected = framesift::testing::fixture_expectations();
  const auto reports = nlohmann::json::parse(read_file(pl::report_dir(c) / "report.json"));
  ASSERT_EQ(reports.size(), expected.size());
  for (const auto& [name, want] : expected) {
    const auto r = ev::report_from_json(read_file(pl::eval_path(c, name)));
    SCOPED_TRACE(name);
    EXPECT_EQ(r.frames_sampled, static_cast<std::size_t>(want.frames_sampled));
    EXPECT_EQ(r.index_bytes, std::filesystem::file_size(pl::index_path(c, name)));
    for (std::size_t i = 0; i < framesift::testing::kFixtureKs.size(); ++i) {
      const int k = framesift::testing::kFixtureKs[i];
      EXPECT_EQ(r.recall(ev::Task::video, k),
                static_cast<double>(want.video_hits[i]) / framesift::testing::kFixtureVideoQueries);
      EXPECT_EQ(r.recall(ev::Task::frame, k),
                static_cast<double>(want.frame_hits[i]) / framesift::testing::kFixtureFrameQueries);
      EXPECT_LE(r.recall(ev::Task::frame, k), r.recall(ev::Task::video, k));
    }
    for (const auto& [cat, hq] : want.video_r1_by_category) {
      EXPECT_EQ(r.recall(ev::Task::video, 1, cat), static_cast<double>(hq.first) / hq.second) << cat;
    }
    EXPECT_NO_THROW(ev::check_monotone(r));
  }
  for (const char* f : {"report.csv", "tradeoff.csv", "frame_counts.csv", "tradeoff_video_r1.svg"}) {
    EXPECT_TRUE(std::filesystem::exists(pl::report_dir(c) / f)) << f;
  }
}

TEST(Pipeline, RerunIsByteIdentical) {
  TempDir tmp;
  const auto fx = framesift::fixture::write_synthetic_fixture(tmp / "fx");
  auto c = fixture_config(fx, tmp / "a");
  c.methods = {"uniform_stride_2", "structural_similarity_dm", "cosine_similarity_combined_resnet152_clip_0.9",
               "shot_boundary"};
  c.jobs = 3;
  run_all(c);
  const auto first = snapshot(c.out);
  // Same directory: every stage accepts its own earlier output.
  run_all(c);
  EXPECT_EQ(snapshot(c.out), first);
  c.out = tmp / "b";
  c.jobs = 1;
  run_all(c);
  EXPECT_EQ(snapshot(c.out), first);
}

TEST(Pipeline, EvalWithoutIndexNamesTheMethod) {
  TempDir tmp;
  const auto fx = framesift::fixture::write_synthetic_fixture(tmp / "fx");
  auto c = fixture_config(fx, tmp / "out");
  c.methods = {"uniform_stride_3"};
  pl::run_sample(c);
  try {
    pl::run_eval(c);
    FAIL();
  } catch (const pl::StageError& e) {
    EXPECT_NE(std::string(e.what()).find("index not found for method uniform_stride_3"), std::string::npos) << e.what();
  }
  c.methods = {"uniform_stride_5"};
  EXPECT_THROW(pl::run_index(c), pl::StageError);
}

TEST(Pipeline, StaleArtifactsAreRefusedUnlessForced) {
  TempDir tmp;
  const auto fx = framesift::fixture::write_synthetic_fixture(tmp / "fx");
  auto c = fixture_config(fx, tmp / "out");
  c.methods = {"uniform_stride_2"};
  run_all(c);

  // A different index configuration would overwrite the index.
  auto changed = c;
  changed.index.m = 8;
  EXPECT_THROW(pl::run_index(changed), pl::StageError);
  changed.force = true;
  EXPECT_NO_THROW(pl::run_index(changed));
  // The eval artifact now sits on top of an index with another key.
  EXPECT_THROW(pl::run_eval(c), pl::StageError);
  EXPECT_NO_THROW(pl::run_eval(changed));

  // Hand-edited samples are detected downstream.
  {
    std::ofstream f(pl::samples_path(c, "uniform_stride_2"), std::ios::app);
    f << "\n";
  }
  EXPECT_THROW(pl::run_index(c), pl::StageError);
  auto forced = c;
  forced.force = true;
  EXPECT_NO_THROW(pl::run_sample(forced));
  EXPECT_NO_THROW(pl::run_index(forced));

  // Output without a stamp is never silently replaced.
  std::filesystem::remove(pl::stamp_path(pl::index_path(c, "uniform_stride_2")));
  EXPECT_THROW(pl::run_index(c), pl::StageError);
}

TEST(Pipeline, DumpNeighbors) {
  TempDir tmp;
  const auto fx = framesift::fixture::write_synthetic_fixture(tmp / "fx");
  auto c = fixture_config(fx, tmp / "out");
  c.methods = {"uniform_stride_1"};
  pl::run_sample(c);
  pl::run_index(c);
  const auto hits = pl::dump_neighbors(c, "uniform_stride_1", "opening scene of video v2", 3);
  ASSERT_EQ(hits.size(), 3u);
  EXPECT_EQ(hits[0].entry.video_id, "v2");
  EXPECT_GE(hits[0].score, hits[1].score);
  EXPECT_THROW(pl::dump_neighbors(c, "uniform_stride_2", "x", 3), pl::StageError);
}

TEST(Cli, RunAndErrorJson) {
  TempDir tmp;
  const auto fx = framesift::fixture::write_synthetic_fixture(tmp / "fx");
  const std::string common = "--corpus " + fx.corpus_manifest.string() + " --embeddings " + fx.embeddings_dir.string() +
                             " --video-queries " + fx.video_queries.string() + " --frame-queries " +
                             fx.frame_queries.string() + " --out " + (tmp / "out").string();
  auto r = run_cli(tmp, common + " --methods uniform_stride_2,cosine_similarity_clip_dm run");
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out).size(), 4u);

  r = run_cli(tmp, common + " --methods uniform_stride_3 eval");
  EXPECT_EQ(r.status, 1);
  const auto err = nlohmann::json::parse(r.err);
  EXPECT_EQ(err["error"]["kind"], "stage");
  EXPECT_NE(err["error"]["message"].get<std::string>().find("not found for method uniform_stride_3"), std::string::npos);

  r = run_cli(tmp, common + " --methods bogus_method sample");
  EXPECT_EQ(r.status, 1);
  EXPECT_EQ(nlohmann::json::parse(r.err)["error"]["kind"], "sampling");

  r = run_cli(tmp, "--no-such-flag sample");
  EXPECT_EQ(r.status, 2);
  EXPECT_EQ(nlohmann::json::parse(r.err)["error"]["kind"], "usage");

  r = run_cli(tmp, common + " --k 2 dump-neighbors --method uniform_stride_2 --query \"a dog runs through the scene\"");
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out).size(), 2u);
}

TEST(Cli, JsonConfigFile) {
  TempDir tmp;
  const auto fx = framesift::fixture::write_synthetic_fixture(tmp / "fx");
  nlohmann::json cfg = {{"corpus", fx.corpus_manifest.string()},
                        {"embeddings", fx.embeddings_dir.string()},
                        {"video_queries", fx.video_queries.string()},
                        {"methods", "uniform_stride_5"},
                        {"out", (tmp / "out").string()}};
  framesift::testing::write_file(tmp / "cfg.json", cfg.dump());
  const auto r = run_cli(tmp, "--config " + (tmp / "cfg.json").string() + " run");
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_TRUE(std::filesystem::exists(tmp / "out/eval/uniform_stride_5.json"));
}
