// framesift: batch front end for sampling, indexing, evaluation and reports.
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "framesift/corpus.hpp"
#include "framesift/pipeline.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using framesift::pipeline::RunConfig;

// Reads JSON config objects ({"corpus": "...", "ef_search": 1000, ...});
// anything else is handed to the TOML reader.
class JsonOrTomlConfig : public CLI::ConfigTOML {
 public:
  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    std::stringstream buffer;
    buffer << input.rdbuf();
    const auto text = buffer.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos || text[first] != '{') {
      std::istringstream again(text);
      return CLI::ConfigTOML::from_config(again);
    }
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw CLI::ConfigError(std::string("invalid JSON config: ") + e.what());
    }
    std::vector<CLI::ConfigItem> items;
    for (const auto& [key, value] : doc.items()) {
      CLI::ConfigItem item;
      item.name = key;
      std::replace(item.name.begin(), item.name.end(), '_', '-');
      auto scalar = [](const nlohmann::json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(scalar(v));
      } else {
        item.inputs.push_back(scalar(value));
      }
      items.push_back(std::move(item));
    }
    return items;
  }
};

void print_json(const ordered_json& j) { std::cout << j.dump(1) << "\n"; }

ordered_json artifacts(const std::string& stage, const std::vector<fs::path>& paths) {
  ordered_json list = ordered_json::array();
  for (const auto& p : paths) list.push_back(p.string());
  return {{"stage", stage}, {"artifacts", std::move(list)}};
}

int fail(const std::string& kind, const std::string& message, int code) {
  ordered_json j{{"error", {{"kind", kind}, {"message", message}}}};
  std::cerr << j.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Key-frame sampling and retrieval evaluation toolkit", "framesift"};
  app.fallthrough();
  app.require_subcommand(1);
  app.config_formatter(std::make_shared<JsonOrTomlConfig>());
  app.set_config("--config", "", "TOML or JSON file mirroring the command-line flags");

  RunConfig cfg;
  std::vector<int> ks = cfg.ks;
  std::string corpus, embeddings, video_queries, frame_queries, shots, out = cfg.out.string();
  app.add_option("--corpus", corpus, "Corpus manifest (JSON array of videos)");
  app.add_option("--methods", cfg.methods, "Sampling method names; default is the full grid")->delimiter(',');
  app.add_option("--embeddings", embeddings, "Directory of embedding files");
  app.add_option("--service-url", cfg.service_url, "Embedding service base URL");
  app.add_option("--video-queries", video_queries, "Video-level queries JSON");
  app.add_option("--frame-queries", frame_queries, "Frame-level annotations JSON");
  app.add_option("--shot-boundaries", shots, "Shot boundary JSON {video_id: [frame, ...]}");
  app.add_option("--k", ks, "Recall cut-offs (dump-neighbors uses the first)")->delimiter(',')->capture_default_str();
  app.add_option("--m", cfg.index.m, "HNSW M")->capture_default_str();
  app.add_option("--ef-construction", cfg.index.ef_construction, "HNSW efConstruction")->capture_default_str();
  app.add_option("--ef-search", cfg.index.ef_search, "HNSW efSearch")->capture_default_str();
  app.add_option("--seed", cfg.index.seed, "HNSW level-assignment seed")->capture_default_str();
  app.add_option("--dim", cfg.index.dim, "Index vector dimension")->capture_default_str();
  app.add_option("--jobs", cfg.jobs, "Parallel workers")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--out", out, "Output directory")->capture_default_str();
  app.add_flag("--force", cfg.force, "Overwrite or consume artifacts from a different configuration");

  auto* sample = app.add_subcommand("sample", "Select key frames for every method");
  auto* index = app.add_subcommand("index", "Build one HNSW index per method from its samples");
  auto* eval = app.add_subcommand("eval", "Compute recall@k for every method");
  auto* report = app.add_subcommand("report", "Write report tables and trade-off plots");
  auto* run = app.add_subcommand("run", "sample, index, eval and report in sequence");

  std::string method, query;
  auto* dump = app.add_subcommand("dump-neighbors", "Print the nearest frames for a text query");
  dump->add_option("--method", method, "Method whose index is searched")->required();
  dump->add_option("--query", query, "Query text")->required();

  std::string video, video_id;
  auto* extract = app.add_subcommand("extract-frames", "Decode a video into 1 fps PNG frames under --out");
  extract->add_option("--video", video, "Video file")->required();
  extract->add_option("--video-id", video_id, "Frame file prefix (default: file stem)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), 2);
  }

  cfg.corpus = corpus;
  cfg.embeddings_dir = embeddings;
  cfg.video_queries = video_queries;
  cfg.frame_queries = frame_queries;
  cfg.shot_boundaries = shots;
  cfg.out = out;
  cfg.ks = ks;

  namespace pl = framesift::pipeline;
  try {
    if (sample->parsed()) print_json(artifacts("sample", pl::run_sample(cfg)));
    if (index->parsed()) print_json(artifacts("index", pl::run_index(cfg)));
    if (eval->parsed()) print_json(artifacts("eval", pl::run_eval(cfg)));
    if (report->parsed()) print_json(artifacts("report", pl::run_report(cfg)));
    if (run->parsed()) {
      ordered_json stages = ordered_json::array();
      stages.push_back(artifacts("sample", pl::run_sample(cfg)));
      stages.push_back(artifacts("index", pl::run_index(cfg)));
      stages.push_back(artifacts("eval", pl::run_eval(cfg)));
      stages.push_back(artifacts("report", pl::run_report(cfg)));
      print_json(stages);
    }
    if (dump->parsed()) {
      if (ks.empty() || ks.front() < 1) throw framesift::ValidationError("--k must be positive");
      ordered_json hits = ordered_json::array();
      int rank = 1;
      for (const auto& h : pl::dump_neighbors(cfg, method, query, static_cast<std::size_t>(ks.front()))) {
        hits.push_back({{"rank", rank++},
                        {"video_id", h.entry.video_id},
                        {"frame_index", h.entry.frame_index},
                        {"category", h.entry.category},
                        {"score", h.score}});
      }
      print_json(hits);
    }
    if (extract->parsed()) {
      const auto frames = framesift::corpus::extract_frames_1fps(video, cfg.out, video_id);
      ordered_json j{{"video", video}, {"frames", frames.size()}, {"out", cfg.out.string()}};
      print_json(j);
    }
  } catch (const framesift::Error& e) {
    return fail(e.kind(), e.what(), 1);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), 3);
  }
  return 0;
}
