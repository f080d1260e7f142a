#pragma once

// Expected retrieval results on the synthetic fixture, frozen from
// tests/oracles/fixture_expected.py. Recalls are stored as hit counts over
// 8 video queries and 12 frame queries at k = 1, 3, 5, 10.

#include <array>
#include <map>
#include <string>

namespace framesift::testing {

inline constexpr int kFixtureVideoQueries = 8;
inline constexpr int kFixtureFrameQueries = 12;
inline constexpr std::array<int, 4> kFixtureKs = {1, 3, 5, 10};

struct FixtureExpectation {
  int frames_sampled;
  std::array<int, 4> video_hits;
  std::array<int, 4> frame_hits;
  // Video-task hits at k=1 per category, as (hits, queries).
  std::map<std::string, std::pair<int, int>> video_r1_by_category;
};

inline const std::map<std::string, FixtureExpectation>& fixture_expectations() {
  static const auto table = [] {
    const std::map<std::string, std::pair<int, int>> all_found = {
        {"animals", {3, 3}}, {"travel", {3, 3}}, {"cooking", {2, 2}}};
    const std::map<std::string, std::pair<int, int>> two_misses = {
        {"animals", {2, 3}}, {"travel", {2, 3}}, {"cooking", {2, 2}}};
    const std::map<std::string, std::pair<int, int>> travel_miss = {
        {"animals", {3, 3}}, {"travel", {2, 3}}, {"cooking", {2, 2}}};

    const FixtureExpectation every_frame{48, {8, 8, 8, 8}, {11, 11, 12, 12}, all_found};
    const FixtureExpectation stride2{24, {7, 8, 8, 8}, {9, 9, 9, 9}, travel_miss};
    const FixtureExpectation stride3{18, {7, 8, 8, 8}, {8, 8, 8, 8}, travel_miss};
    const FixtureExpectation stride5{12, {6, 8, 8, 8}, {4, 4, 4, 4}, two_misses};
    const FixtureExpectation pixel{12, {6, 8, 8, 8}, {3, 3, 3, 3}, two_misses};
    const FixtureExpectation semantic{16, {8, 8, 8, 8}, {4, 5, 5, 5}, all_found};
    const FixtureExpectation resnet50_high{32, {8, 8, 8, 8}, {8, 9, 9, 9}, all_found};
    const FixtureExpectation shots{19, {7, 8, 8, 8}, {5, 6, 6, 6}, travel_miss};

    std::map<std::string, FixtureExpectation> t;
    t["uniform_stride_1"] = every_frame;
    t["uniform_stride_2"] = stride2;
    t["uniform_stride_3"] = stride3;
    t["uniform_stride_5"] = stride5;
    for (const char* th : {"1.5", "2.0", "2.5", "3.0", "5.0"}) t[std::string("likelihood_ratio_") + th] = pixel;
    t["likelihood_ratio_dm"] = every_frame;
    for (const char* th : {"0.005", "0.01", "0.015", "0.02"}) t[std::string("histogram_comparison_") + th] = pixel;
    t["histogram_comparison_dm"] = every_frame;
    for (const char* th : {"0.2", "0.3", "0.4", "0.5", "dm"}) t[std::string("structural_similarity_") + th] = pixel;
    for (const char* th : {"0.8", "0.85", "0.9", "0.95", "dm"}) t[std::string("cosine_similarity_clip_") + th] = semantic;
    for (const char* th : {"0.8", "0.85", "dm"}) t[std::string("cosine_similarity_resnet50_") + th] = semantic;
    for (const char* th : {"0.9", "0.95"}) t[std::string("cosine_similarity_resnet50_") + th] = resnet50_high;
    for (const char* th : {"0.8", "dm"}) t[std::string("cosine_similarity_resnet152_") + th] = semantic;
    for (const char* th : {"0.85", "0.9", "0.95"}) t[std::string("cosine_similarity_resnet152_") + th] = every_frame;
    for (const char* th : {"0.8", "0.85", "0.9", "dm"})
      t[std::string("cosine_similarity_combined_resnet152_clip_") + th] = semantic;
    t["cosine_similarity_combined_resnet152_clip_0.95"] = every_frame;
    t["shot_boundary"] = shots;
    return t;
  }();
  return table;
}

}  // namespace framesift::testing
