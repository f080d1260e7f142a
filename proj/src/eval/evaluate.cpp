#include <algorithm>
#include <map>
#include <set>

#include "framesift/eval.hpp"
#include "framesift/parallel.hpp"

namespace framesift::eval {

namespace {

struct PendingQuery {
  std::string query_id;
  Task task = Task::video;
  std::string video_id;
  std::string text;
  int frame_from = 0;
  int frame_to = 0;
  std::string category;
};

std::vector<RecallCell> aggregate(std::span<const RetrievalOutcome> outcomes, std::span<const int> ks) {
  // (task, category, k) -> (found, total)
  std::map<std::tuple<Task, std::string, int>, std::pair<std::size_t, std::size_t>> tally;
  std::set<std::string> categories;
  std::set<Task> tasks;
  for (const auto& o : outcomes) {
    for (const auto& cat : {o.category, std::string(kAllCategories)}) {
      auto& t = tally[{o.task, cat, o.k}];
      t.first += o.found ? 1 : 0;
      t.second += 1;
    }
    categories.insert(o.category);
    tasks.insert(o.task);
  }
  std::vector<std::string> order(categories.begin(), categories.end());
  order.erase(std::remove(order.begin(), order.end(), std::string(kAllCategories)), order.end());
  order.emplace_back(kAllCategories);

  std::vector<RecallCell> cells;
  for (const auto task : {Task::video, Task::frame}) {
    if (!tasks.contains(task)) continue;
    for (const auto& cat : order) {
      for (const int k : ks) {
        auto it = tally.find({task, cat, k});
        if (it == tally.end()) continue;
        const auto [found, total] = it->second;
        cells.push_back({task, k, cat, static_cast<double>(found) / static_cast<double>(total), total});
      }
    }
  }
  return cells;
}

}  // namespace

RetrievalReport evaluate(const std::string& method, const vectorstore::HnswIndex& index, const corpus::Corpus& corpus,
                         std::span<const corpus::VideoQuery> video_queries,
                         std::span<const corpus::FrameQuery> frame_queries,
                         const embeddings::EmbeddingProvider& provider, const EvalOptions& options) {
  std::vector<int> ks = options.ks;
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  if (ks.empty() || ks.front() < 1) throw EvalError("ks must be a non-empty set of positive integers");
  const auto k_max = static_cast<std::size_t>(ks.back());

  RetrievalReport report;
  report.method = method;
  report.frames_sampled = index.size();

  std::vector<PendingQuery> pending;
  for (const auto& q : video_queries) {
    const auto* video = corpus.find(q.video_id);
    if (video == nullptr) {
      ++report.skipped_queries;
      continue;
    }
    pending.push_back({q.query_id, Task::video, q.video_id, q.text, 0, 0, video->category});
  }
  for (const auto& q : frame_queries) {
    const auto* video = corpus.find(q.video_id);
    if (video == nullptr) {
      ++report.skipped_queries;
      continue;
    }
    pending.push_back({q.query_id, Task::frame, q.video_id, q.text, q.frame_from, q.frame_to, video->category});
  }
  if (pending.empty()) throw EvalError("no evaluable queries for method " + method);

  std::vector<std::string> texts;
  texts.reserve(pending.size());
  for (const auto& p : pending) texts.push_back(p.text);
  const auto embedded = provider.get_text_embeddings(texts, options.text_model);
  if (embedded.size() != pending.size()) throw EvalError("embedding provider returned the wrong number of vectors");

  std::vector<std::vector<RetrievalOutcome>> per_query(pending.size());
  parallel_for(pending.size(), options.jobs, [&](std::size_t i) {
    const auto& p = pending[i];
    const auto query = embeddings::l2_normalize(std::span<const float>(embedded[i].vector));
    const auto hits = options.mode == SearchMode::exact ? vectorstore::exact_search(index.table(), query, k_max)
                                                        : index.search(query, k_max, options.ef_search);
    for (const int k : ks) {
      const auto top = std::span(hits).first(std::min(hits.size(), static_cast<std::size_t>(k)));
      const int video_found = item_found_video(top, p.video_id);
      const int found = p.task == Task::video ? video_found : item_found_frame(top, p.video_id, p.frame_from, p.frame_to);
      per_query[i].push_back({p.query_id, p.task, k, found, p.category, video_found});
    }
  });
  for (auto& q : per_query) {
    for (auto& o : q) report.outcomes.push_back(std::move(o));
  }
  report.cells = aggregate(report.outcomes, ks);
  return report;
}

void check_monotone(const RetrievalReport& report) {
  std::map<std::pair<Task, std::string>, std::vector<const RecallCell*>> groups;
  for (const auto& c : report.cells) groups[{c.task, c.category}].push_back(&c);
  for (auto& [key, cells] : groups) {
    std::sort(cells.begin(), cells.end(), [](auto* a, auto* b) { return a->k < b->k; });
    for (std::size_t i = 1; i < cells.size(); ++i) {
      if (cells[i]->recall < cells[i - 1]->recall) {
        throw EvalError("recall is not monotone in k for " + report.method + " (" + std::string(to_string(key.first)) +
                        ", " + key.second + "): r@" + std::to_string(cells[i - 1]->k) + " = " +
                        format_number(cells[i - 1]->recall) + " > r@" + std::to_string(cells[i]->k) + " = " +
                        format_number(cells[i]->recall));
      }
    }
  }
}

}  // namespace framesift::eval
