#include <charconv>

#include "json.hpp"

#include "framesift/binary_io.hpp"
#include "framesift/eval.hpp"

namespace framesift::eval {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string format_number(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string report_to_json(const RetrievalReport& report) {
  ordered_json j;
  j["method"] = report.method;
  j["frames_sampled"] = report.frames_sampled;
  j["index_bytes"] = report.index_bytes;
  j["skipped_queries"] = report.skipped_queries;
  j["cells"] = ordered_json::array();
  for (const auto& c : report.cells) {
    j["cells"].push_back({{"task", to_string(c.task)},
                          {"k", c.k},
                          {"category", c.category},
                          {"recall", c.recall},
                          {"n_queries", c.n_queries}});
  }
  j["outcomes"] = ordered_json::array();
  for (const auto& o : report.outcomes) {
    j["outcomes"].push_back({{"query_id", o.query_id},
                             {"task", to_string(o.task)},
                             {"k", o.k},
                             {"found", o.found},
                             {"video_found", o.video_found},
                             {"category", o.category}});
  }
  return j.dump(1) + "\n";
}

RetrievalReport report_from_json(std::string_view text) {
  RetrievalReport r;
  try {
    const auto j = ordered_json::parse(text);
    r.method = j.at("method").get<std::string>();
    r.frames_sampled = j.at("frames_sampled").get<std::size_t>();
    r.index_bytes = j.at("index_bytes").get<std::size_t>();
    r.skipped_queries = j.value("skipped_queries", std::size_t{0});
    for (const auto& c : j.at("cells")) {
      r.cells.push_back({task_from_string(c.at("task").get<std::string>()), c.at("k").get<int>(),
                         c.at("category").get<std::string>(), c.at("recall").get<double>(),
                         c.at("n_queries").get<std::size_t>()});
    }
    for (const auto& o : j.value("outcomes", ordered_json::array())) {
      r.outcomes.push_back({o.at("query_id").get<std::string>(), task_from_string(o.at("task").get<std::string>()),
                            o.at("k").get<int>(), o.at("found").get<int>(), o.at("category").get<std::string>(),
                            o.at("video_found").get<int>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw EvalError(std::string("malformed report JSON: ") + e.what());
  }
  return r;
}

std::string report_csv(std::span<const RetrievalReport> reports) {
  std::string out = "method,task,k,category,recall,n_queries,frames_sampled,index_bytes\n";
  for (const auto& r : reports) {
    for (const auto& c : r.cells) {
      out += r.method + "," + std::string(to_string(c.task)) + "," + std::to_string(c.k) + "," + c.category + "," +
             format_number(c.recall) + "," + std::to_string(c.n_queries) + "," + std::to_string(r.frames_sampled) +
             "," + std::to_string(r.index_bytes) + "\n";
    }
  }
  return out;
}

std::string frame_counts_csv(std::span<const RetrievalReport> reports) {
  std::string out = "method,frames_sampled,index_bytes\n";
  for (const auto& r : reports) {
    out += r.method + "," + std::to_string(r.frames_sampled) + "," + std::to_string(r.index_bytes) + "\n";
  }
  return out;
}

std::vector<fs::path> emit_reports(std::span<const RetrievalReport> reports, const fs::path& out_dir) {
  if (reports.empty()) throw EvalError("no reports to emit");
  for (const auto& r : reports) check_monotone(r);

  std::vector<std::pair<fs::path, std::string>> files;
  files.emplace_back(out_dir / "report.csv", report_csv(reports));
  ordered_json all = ordered_json::array();
  for (const auto& r : reports) all.push_back(ordered_json::parse(report_to_json(r)));
  files.emplace_back(out_dir / "report.json", all.dump(1) + "\n");
  files.emplace_back(out_dir / "tradeoff.csv", tradeoff_csv(reports));
  files.emplace_back(out_dir / "frame_counts.csv", frame_counts_csv(reports));

  std::vector<std::pair<Task, int>> panels;
  for (const auto& c : reports.front().cells) {
    if (c.category != kAllCategories) continue;
    panels.emplace_back(c.task, c.k);
  }
  for (const auto& [task, k] : panels) {
    files.emplace_back(out_dir / ("tradeoff_" + std::string(to_string(task)) + "_r" + std::to_string(k) + ".svg"),
                       tradeoff_svg(reports, task, k));
  }

  std::vector<fs::path> written;
  for (const auto& [path, text] : files) {
    write_text_file(path, text);
    written.push_back(path);
  }
  return written;
}

}  // namespace framesift::eval
