#include <algorithm>

#include "framesift/eval.hpp"

namespace framesift::eval {

std::string_view to_string(Task task) { return task == Task::video ? "video" : "frame"; }

Task task_from_string(std::string_view name) {
  if (name == "video") return Task::video;
  if (name == "frame") return Task::frame;
  throw EvalError("unknown task '" + std::string(name) + "'");
}

int item_found_video(std::span<const vectorstore::SearchHit> hits, std::string_view target_video_id) {
  return std::any_of(hits.begin(), hits.end(), [&](const auto& h) { return h.entry.video_id == target_video_id; });
}

int item_found_frame(std::span<const vectorstore::SearchHit> hits, std::string_view target_video_id, int frame_from,
                     int frame_to) {
  return std::any_of(hits.begin(), hits.end(), [&](const auto& h) {
    return h.entry.video_id == target_video_id && frame_from <= h.entry.frame_index && h.entry.frame_index <= frame_to;
  });
}

double recall_at_k(std::span<const RetrievalOutcome> outcomes) {
  if (outcomes.empty()) throw EvalError("recall@k of an empty outcome set");
  std::size_t found = 0;
  for (const auto& o : outcomes) {
    if (o.task != outcomes.front().task || o.k != outcomes.front().k) {
      throw EvalError("recall@k over outcomes with different task or k");
    }
    found += o.found ? 1 : 0;
  }
  return static_cast<double>(found) / static_cast<double>(outcomes.size());
}

const RecallCell* RetrievalReport::find(Task task, int k, std::string_view category) const {
  for (const auto& c : cells) {
    if (c.task == task && c.k == k && c.category == category) return &c;
  }
  return nullptr;
}

double RetrievalReport::recall(Task task, int k, std::string_view category) const {
  const auto* c = find(task, k, category);
  if (c == nullptr) {
    throw EvalError("report for " + method + " has no " + std::string(to_string(task)) + " r@" + std::to_string(k) +
                    " cell for category " + std::string(category));
  }
  return c->recall;
}

}  // namespace framesift::eval
