#include <algorithm>
#include <cmath>
#include <queue>
#include <random>

#include "framesift/vectorstore.hpp"

namespace framesift::vectorstore {

namespace {

// Visited marks reused across calls on the same thread; bumping the epoch
// clears them in O(1).
struct VisitedSet {
  std::vector<std::uint32_t> marks;
  std::uint32_t epoch = 0;

  void reset(std::size_t n) {
    if (marks.size() < n) marks.resize(n, 0);
    if (++epoch == 0) {
      std::fill(marks.begin(), marks.end(), 0);
      epoch = 1;
    }
  }
  bool insert(std::uint32_t id) {
    if (marks[id] == epoch) return false;
    marks[id] = epoch;
    return true;
  }
};

thread_local VisitedSet t_visited;

// Uniform on (0, 1] from the top 53 bits, so the level draw is the same on
// every standard library.
double unit_interval(std::mt19937_64& rng) { return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53; }

}  // namespace

float HnswIndex::distance(const float* q, std::uint32_t id) const {
  return -std::clamp(dot(q, table_.vector(id), table_.dim()), -1.0f, 1.0f);
}

float HnswIndex::distance(std::uint32_t a, std::uint32_t b) const { return distance(table_.vector(a), b); }

std::size_t HnswIndex::max_degree(int level) const {
  return static_cast<std::size_t>(level == 0 ? 2 * config_.m : config_.m);
}

std::vector<HnswIndex::Candidate> HnswIndex::search_layer(const float* q, std::vector<Candidate> entry_points,
                                                          std::size_t ef, int level) const {
  auto& visited = t_visited;
  visited.reset(table_.size());
  std::priority_queue<Candidate, std::vector<Candidate>, std::greater<>> frontier;
  std::priority_queue<Candidate> best;  // top() is the current worst kept result
  for (const auto& ep : entry_points) {
    if (!visited.insert(ep.id)) continue;
    frontier.push(ep);
    best.push(ep);
    if (best.size() > ef) best.pop();
  }
  while (!frontier.empty()) {
    const auto c = frontier.top();
    if (best.top() < c) break;
    frontier.pop();
    for (const auto nb : links_[c.id][level]) {
      if (!visited.insert(nb)) continue;
      const Candidate cand{distance(q, nb), nb};
      if (best.size() < ef || cand < best.top()) {
        frontier.push(cand);
        best.push(cand);
        if (best.size() > ef) best.pop();
      }
    }
  }
  std::vector<Candidate> out(best.size());
  for (auto i = out.size(); i-- > 0;) {
    out[i] = best.top();
    best.pop();
  }
  return out;
}

std::vector<HnswIndex::Candidate> HnswIndex::select_neighbors(std::vector<Candidate> candidates, std::size_t m) const {
  std::sort(candidates.begin(), candidates.end());
  if (candidates.size() < m) return candidates;
  std::vector<Candidate> kept;
  kept.reserve(m);
  for (const auto& c : candidates) {
    if (kept.size() >= m) break;
    const bool diverse = std::none_of(kept.begin(), kept.end(), [&](const Candidate& r) { return distance(c.id, r.id) < c.dist; });
    if (diverse) kept.push_back(c);
  }
  return kept;
}

void HnswIndex::insert(std::uint32_t id, int level) {
  links_[id].resize(static_cast<std::size_t>(level) + 1);
  if (entry_point_ < 0) {
    entry_point_ = id;
    max_level_ = level;
    return;
  }
  const float* q = table_.vector(id);
  const auto ep_id = static_cast<std::uint32_t>(entry_point_);
  std::vector<Candidate> eps{{distance(q, ep_id), ep_id}};
  for (int lc = max_level_; lc > level; --lc) eps = {search_layer(q, eps, 1, lc).front()};

  for (int lc = std::min(level, max_level_); lc >= 0; --lc) {
    auto found = search_layer(q, eps, static_cast<std::size_t>(config_.ef_construction), lc);
    const auto chosen = select_neighbors(found, static_cast<std::size_t>(config_.m));
    auto& own = links_[id][lc];
    for (const auto& c : chosen) own.push_back(c.id);

    const auto cap = max_degree(lc);
    for (const auto& c : chosen) {
      auto& theirs = links_[c.id][lc];
      if (theirs.size() < cap) {
        theirs.push_back(id);
        continue;
      }
      std::vector<Candidate> pool;
      pool.reserve(theirs.size() + 1);
      pool.push_back({c.dist, id});
      for (const auto nb : theirs) pool.push_back({distance(c.id, nb), nb});
      const auto pruned = select_neighbors(std::move(pool), cap);
      theirs.clear();
      for (const auto& p : pruned) theirs.push_back(p.id);
    }
    eps = std::move(found);
  }
  if (level > max_level_) {
    entry_point_ = id;
    max_level_ = level;
  }
}

HnswIndex HnswIndex::build(VectorTable table, const IndexConfig& config) {
  config.validate();
  if (table.dim() != config.dim) {
    throw VectorStoreError("table dim " + std::to_string(table.dim()) + " != config dim " + std::to_string(config.dim));
  }
  HnswIndex index;
  index.table_ = std::move(table);
  index.config_ = config;
  const auto n = index.table_.size();
  index.levels_.resize(n);
  index.links_.resize(n);
  std::mt19937_64 rng(config.seed);
  const double ml = 1.0 / std::log(static_cast<double>(config.m));
  for (std::size_t i = 0; i < n; ++i) {
    index.levels_[i] = static_cast<int>(std::floor(-std::log(unit_interval(rng)) * ml));
  }
  for (std::size_t i = 0; i < n; ++i) index.insert(static_cast<std::uint32_t>(i), index.levels_[i]);
  return index;
}

std::vector<SearchHit> HnswIndex::search(std::span<const float> query, std::size_t k, std::optional<int> ef) const {
  if (query.size() != table_.dim()) {
    throw VectorStoreError("query dim " + std::to_string(query.size()) + " != index dim " + std::to_string(table_.dim()));
  }
  if (k == 0) throw VectorStoreError("k must be positive");
  if (table_.empty()) return {};
  if (k >= table_.size()) return exact_search(table_, query, k);

  const auto beam = std::max<std::size_t>(static_cast<std::size_t>(std::max(1, ef.value_or(config_.ef_search))), k);
  const auto ep_id = static_cast<std::uint32_t>(entry_point_);
  std::vector<Candidate> eps{{distance(query.data(), ep_id), ep_id}};
  for (int lc = max_level_; lc > 0; --lc) eps = {search_layer(query.data(), eps, 1, lc).front()};
  const auto found = search_layer(query.data(), eps, beam, 0);

  std::vector<SearchHit> hits;
  hits.reserve(std::min(k, found.size()));
  for (std::size_t i = 0; i < found.size() && i < k; ++i) {
    hits.push_back({table_.entry(found[i].id), -static_cast<double>(found[i].dist)});
  }
  return hits;
}

}  // namespace framesift::vectorstore
