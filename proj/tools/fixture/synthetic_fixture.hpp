#pragma once

#include <filesystem>

namespace framesift::fixture {

// Paths of a generated synthetic corpus.
struct FixturePaths {
  std::filesystem::path root;
  std::filesystem::path corpus_manifest;
  std::filesystem::path embeddings_dir;
  std::filesystem::path video_queries;
  std::filesystem::path frame_queries;
  std::filesystem::path shot_boundaries;
};

// Six 8-frame videos in three categories, two shots each, with hand-placed
// embeddings so every method of the default grid selects a known frame set
// and every query has a known nearest neighbour. The layout is documented
// in tests/oracles/fixture_expected.py, which recomputes the expected
// results independently.
FixturePaths write_synthetic_fixture(const std::filesystem::path& root);

}  // namespace framesift::fixture
