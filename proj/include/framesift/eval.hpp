#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "framesift/corpus.hpp"
#include "framesift/embeddings.hpp"
#include "framesift/error.hpp"
#include "framesift/vectorstore.hpp"

namespace framesift::eval {

class EvalError : public Error {
 public:
  explicit EvalError(const std::string& message) : Error("eval", message) {}
};

enum class Task { video, frame };

std::string_view to_string(Task task);
Task task_from_string(std::string_view name);

inline const std::vector<int> kDefaultKs = {1, 3, 5, 10};
inline constexpr std::string_view kAllCategories = "all";

struct RetrievalOutcome {
  std::string query_id;
  Task task = Task::video;
  int k = 1;
  int found = 0;
  std::string category;
  // item_found_video on the same hits; equals `found` for the video task.
  int video_found = 0;
};

// 1 iff any hit comes from target_video_id. Hits must already be cut to k.
int item_found_video(std::span<const vectorstore::SearchHit> hits, std::string_view target_video_id);
// 1 iff some hit is from the target video with frame_from <= index <= frame_to.
int item_found_frame(std::span<const vectorstore::SearchHit> hits, std::string_view target_video_id, int frame_from,
                     int frame_to);

// Mean of `found`. Throws on an empty set or mixed (task, k).
double recall_at_k(std::span<const RetrievalOutcome> outcomes);

struct RecallCell {
  Task task = Task::video;
  int k = 1;
  std::string category;
  double recall = 0.0;
  std::size_t n_queries = 0;
};

struct RetrievalReport {
  std::string method;
  std::vector<RecallCell> cells;  // ordered by task, category (then "all"), k
  std::size_t frames_sampled = 0;
  std::size_t index_bytes = 0;
  std::size_t skipped_queries = 0;
  std::vector<RetrievalOutcome> outcomes;

  const RecallCell* find(Task task, int k, std::string_view category = kAllCategories) const;
  // Throws when the cell does not exist.
  double recall(Task task, int k, std::string_view category = kAllCategories) const;
};

enum class SearchMode { hnsw, exact };

struct EvalOptions {
  std::vector<int> ks = kDefaultKs;
  std::optional<int> ef_search;  // defaults to the index's own setting
  int jobs = 1;
  SearchMode mode = SearchMode::hnsw;
  std::string text_model = "clip";
};

// Embeds every query text, L2-normalises it, searches the index and scores
// both tasks at every k. Queries whose video is not in `corpus` are skipped
// and counted. index_bytes is left for the caller to fill in.
RetrievalReport evaluate(const std::string& method, const vectorstore::HnswIndex& index, const corpus::Corpus& corpus,
                         std::span<const corpus::VideoQuery> video_queries,
                         std::span<const corpus::FrameQuery> frame_queries,
                         const embeddings::EmbeddingProvider& provider, const EvalOptions& options = {});

// Throws EvalError when recall decreases with k for any (task, category).
void check_monotone(const RetrievalReport& report);

// --- Serialisation and reports ----------------------------------------------

std::string report_to_json(const RetrievalReport& report);
RetrievalReport report_from_json(std::string_view text);

// Columns: method, task, k, category, recall, n_queries, frames_sampled, index_bytes
std::string report_csv(std::span<const RetrievalReport> reports);
// Columns: method, frames_sampled, recall, task, k (overall category only)
std::string tradeoff_csv(std::span<const RetrievalReport> reports);
// Scatter of frames sampled against recall for one (task, k).
std::string tradeoff_svg(std::span<const RetrievalReport> reports, Task task, int k);
// Columns: method, frames_sampled, index_bytes
std::string frame_counts_csv(std::span<const RetrievalReport> reports);

// Checks monotonicity of every report, then writes report.csv, report.json,
// tradeoff.csv, tradeoff_<task>_r<k>.svg and frame_counts.csv to out_dir.
// Nothing is written if a check fails.
std::vector<std::filesystem::path> emit_reports(std::span<const RetrievalReport> reports,
                                                const std::filesystem::path& out_dir);

std::string format_number(double value);

}  // namespace framesift::eval
