#include <algorithm>

#include "json.hpp"

#include "framesift/binary_io.hpp"
#include "framesift/hashing.hpp"
#include "framesift/parallel.hpp"
#include "framesift/pipeline.hpp"

namespace framesift::pipeline {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

// --- Fingerprints and stamps -------------------------------------------------

std::string corpus_fingerprint(const RunConfig& config, const corpus::Corpus& corpus) {
  ordered_json j;
  j["manifest"] = sha256_file(config.corpus);
  ordered_json frames = ordered_json::array();
  for (const auto& v : corpus.videos()) {
    for (const auto& f : corpus.frames(v.video_id)) {
      frames.push_back({fs::path(f.uri).filename().string(), fs::file_size(f.uri)});
    }
  }
  j["frames"] = std::move(frames);
  return sha256_hex(j.dump());
}

std::string embeddings_fingerprint(const RunConfig& config, const embeddings::EmbeddingProvider* provider) {
  if (const auto* files = dynamic_cast<const embeddings::FileEmbeddingProvider*>(provider)) {
    ordered_json j = files->source_digests();
    return sha256_hex(j.dump());
  }
  return config.service_url.empty() ? "" : "service:" + config.service_url;
}

std::string optional_file_hash(const fs::path& p) { return p.empty() ? "" : sha256_file(p); }

std::string key_of(const ordered_json& parts) { return sha256_hex(parts.dump()); }

struct Stamp {
  std::string key;
  std::string artifact_sha256;
};

std::optional<Stamp> read_stamp(const fs::path& artifact) {
  const auto p = stamp_path(artifact);
  if (!fs::exists(p)) return std::nullopt;
  try {
    const auto j = nlohmann::json::parse(read_text_file(p));
    return Stamp{j.at("key").get<std::string>(), j.at("artifact_sha256").get<std::string>()};
  } catch (const nlohmann::json::exception&) {
    return std::nullopt;
  }
}

void write_artifact(const fs::path& artifact, std::span<const std::byte> bytes, const std::string& stage,
                    const std::string& method, const std::string& key) {
  write_file_bytes(artifact, bytes);
  ordered_json stamp;
  stamp["stage"] = stage;
  stamp["method"] = method;
  stamp["key"] = key;
  stamp["artifact_sha256"] = sha256_hex(bytes);
  write_text_file(stamp_path(artifact), stamp.dump(1) + "\n");
}

void write_artifact(const fs::path& artifact, const std::string& text, const std::string& stage,
                    const std::string& method, const std::string& key) {
  write_artifact(artifact, std::as_bytes(std::span(text.data(), text.size())), stage, method, key);
}

// Refuses to overwrite an artifact produced under a different key.
void guard_output(const RunConfig& config, const fs::path& artifact, const std::string& key) {
  if (config.force || !fs::exists(artifact)) return;
  const auto stamp = read_stamp(artifact);
  if (!stamp) {
    throw StageError(artifact.string() + " exists without a stamp; use --force to overwrite it");
  }
  if (stamp->key != key) {
    throw StageError(artifact.string() + " was produced by a different configuration; use --force to overwrite it");
  }
}

// Checks an upstream artifact exists, is unmodified and (when expected_key is
// known) matches the current configuration.
void guard_input(const RunConfig& config, const fs::path& artifact, const std::string& what, const std::string& method,
                 const std::string& producer, const std::optional<std::string>& expected_key) {
  if (!fs::exists(artifact)) {
    throw StageError(what + " not found for method " + method + " (expected " + artifact.string() + "; run `framesift " +
                     producer + "` first)");
  }
  if (config.force) return;
  const auto stamp = read_stamp(artifact);
  if (!stamp || stamp->artifact_sha256 != sha256_file(artifact)) {
    throw StageError(what + " for method " + method + " was modified after it was written (" + artifact.string() +
                     "); rerun `framesift " + producer + "` or pass --force");
  }
  if (expected_key && stamp->key != *expected_key) {
    throw StageError(what + " for method " + method + " is stale for the current configuration; rerun `framesift " +
                     producer + "` or pass --force");
  }
}

// --- Stage keys ---------------------------------------------------------------

struct Context {
  corpus::Corpus corpus;
  std::unique_ptr<embeddings::EmbeddingProvider> provider;
  std::string corpus_fp;
  std::string embeddings_fp;
};

Context open_context(const RunConfig& config, bool need_provider) {
  if (config.corpus.empty()) throw ValidationError("--corpus is required");
  Context ctx{corpus::Corpus::load_manifest(config.corpus), make_provider(config), {}, {}};
  ctx.corpus_fp = corpus_fingerprint(config, ctx.corpus);
  ctx.embeddings_fp = embeddings_fingerprint(config, ctx.provider.get());
  if (need_provider && !ctx.provider) throw ValidationError("an embedding source is required (--embeddings or --service-url)");
  return ctx;
}

std::string sample_key(const RunConfig& config, const Context& ctx, const sampling::SamplingMethodSpec& m) {
  ordered_json j{{"stage", "sample"}, {"method", m.name()}, {"corpus", ctx.corpus_fp}};
  if (m.family == sampling::Family::cosine_similarity) j["embeddings"] = ctx.embeddings_fp;
  if (m.family == sampling::Family::shot_boundary) j["shots"] = optional_file_hash(config.shot_boundaries);
  return key_of(j);
}

std::string index_key(const RunConfig& config, const Context& ctx, const std::string& method,
                      const std::string& samples_sha) {
  const auto& ic = config.index;
  return key_of({{"stage", "index"},
                 {"method", method},
                 {"samples", samples_sha},
                 {"embeddings", ctx.embeddings_fp},
                 {"model", config.index_model},
                 {"dim", ic.dim},
                 {"m", ic.m},
                 {"ef_construction", ic.ef_construction},
                 {"ef_search", ic.ef_search},
                 {"seed", ic.seed}});
}

std::string eval_key(const RunConfig& config, const Context& ctx, const std::string& method,
                     const std::string& index_sha) {
  return key_of({{"stage", "eval"},
                 {"method", method},
                 {"index", index_sha},
                 {"corpus", ctx.corpus_fp},
                 {"embeddings", ctx.embeddings_fp},
                 {"video_queries", optional_file_hash(config.video_queries)},
                 {"frame_queries", optional_file_hash(config.frame_queries)},
                 {"ks", config.ks},
                 {"ef_search", config.index.ef_search}});
}

std::optional<std::string> hash_if_exists(const fs::path& p) {
  return fs::exists(p) ? std::optional(sha256_file(p)) : std::nullopt;
}

}  // namespace

std::vector<fs::path> run_sample(const RunConfig& config) {
  const auto methods = resolve_methods(config);
  const bool needs_embeddings = std::any_of(methods.begin(), methods.end(), [](const auto& m) {
    return m.family == sampling::Family::cosine_similarity;
  });
  const auto ctx = open_context(config, needs_embeddings);

  std::vector<std::string> keys;
  for (const auto& m : methods) {
    keys.push_back(sample_key(config, ctx, m));
    guard_output(config, samples_path(config, m.name()), keys.back());
  }

  sampling::ShotBoundaryTable shots;
  const bool needs_shots = std::any_of(methods.begin(), methods.end(), [](const auto& m) {
    return m.family == sampling::Family::shot_boundary;
  });
  if (needs_shots) {
    if (config.shot_boundaries.empty()) throw ValidationError("shot_boundary sampling needs --shot-boundaries");
    shots = sampling::load_shot_boundaries(config.shot_boundaries);
  }
  sampling::RunInputs inputs{ctx.provider.get(), &shots, config.jobs, false};
  const auto results = sampling::run_methods(ctx.corpus, methods, inputs);

  std::vector<fs::path> written;
  for (std::size_t i = 0; i < methods.size(); ++i) {
    const auto path = samples_path(config, methods[i].name());
    write_artifact(path, sampling::to_jsonl(results[i]), "sample", methods[i].name(), keys[i]);
    written.push_back(path);
  }
  return written;
}

std::vector<fs::path> run_index(const RunConfig& config) {
  const auto methods = resolve_methods(config);
  const auto ctx = open_context(config, true);
  config.index.validate();

  std::vector<fs::path> written(methods.size());
  parallel_for(methods.size(), config.jobs, [&](std::size_t i) {
    const auto name = methods[i].name();
    const auto samples = samples_path(config, name);
    guard_input(config, samples, "samples", name, "sample", sample_key(config, ctx, methods[i]));
    const auto key = index_key(config, ctx, name, sha256_file(samples));
    const auto out = index_path(config, name);
    guard_output(config, out, key);

    std::vector<corpus::FrameRef> frames;
    std::vector<std::string> categories;
    for (const auto& r : sampling::parse_jsonl(read_text_file(samples))) {
      const auto* video = ctx.corpus.find(r.video_id);
      if (video == nullptr) throw StageError("samples for " + name + " reference unknown video " + r.video_id);
      const auto all = ctx.corpus.frames(r.video_id);
      for (const int idx : r.selected) {
        if (idx < 0 || static_cast<std::size_t>(idx) >= all.size()) {
          throw StageError("samples for " + name + " select frame " + std::to_string(idx) + " of " + r.video_id +
                           ", which has " + std::to_string(all.size()) + " frames");
        }
        frames.push_back(all[static_cast<std::size_t>(idx)]);
        categories.push_back(video->category);
      }
    }
    const auto records = ctx.provider->get_frame_embeddings(frames, config.index_model);
    vectorstore::VectorTable table(config.index.dim);
    for (std::size_t f = 0; f < frames.size(); ++f) {
      table.add(frames[f].video_id, frames[f].frame_index, categories[f],
                embeddings::l2_normalize(std::span<const float>(records[f].vector)));
    }
    const auto index = vectorstore::HnswIndex::build(std::move(table), config.index);
    write_artifact(out, index.serialize(), "index", name, key);
    written[i] = out;
  });
  return written;
}

std::vector<fs::path> run_eval(const RunConfig& config) {
  const auto methods = resolve_methods(config);
  const auto ctx = open_context(config, true);
  if (config.video_queries.empty() && config.frame_queries.empty()) {
    throw ValidationError("eval needs --video-queries and/or --frame-queries");
  }
  const auto video_queries =
      config.video_queries.empty() ? std::vector<corpus::VideoQuery>{} : corpus::load_video_queries(config.video_queries);
  const auto frame_queries = config.frame_queries.empty()
                                 ? std::vector<corpus::FrameQuery>{}
                                 : corpus::load_frame_queries(config.frame_queries, ctx.corpus);

  std::vector<fs::path> written(methods.size());
  parallel_for(methods.size(), config.jobs, [&](std::size_t i) {
    const auto name = methods[i].name();
    const auto index_file = index_path(config, name);
    std::optional<std::string> expected;
    if (const auto samples_sha = hash_if_exists(samples_path(config, name))) {
      expected = index_key(config, ctx, name, *samples_sha);
    }
    guard_input(config, index_file, "index", name, "index", expected);
    const auto key = eval_key(config, ctx, name, sha256_file(index_file));
    const auto out = eval_path(config, name);
    guard_output(config, out, key);

    const auto index = vectorstore::HnswIndex::load(index_file, config.index.dim);
    eval::EvalOptions options;
    options.ks = config.ks;
    options.ef_search = config.index.ef_search;
    options.jobs = 1;
    options.text_model = config.index_model;
    auto report = eval::evaluate(name, index, ctx.corpus, video_queries, frame_queries, *ctx.provider, options);
    report.index_bytes = fs::file_size(index_file);
    write_artifact(out, eval::report_to_json(report), "eval", name, key);
    written[i] = out;
  });
  return written;
}

std::vector<fs::path> run_report(const RunConfig& config) {
  const auto methods = resolve_methods(config);
  std::vector<eval::RetrievalReport> reports;
  ordered_json parts{{"stage", "report"}};
  ordered_json evals = ordered_json::array();
  for (const auto& m : methods) {
    const auto name = m.name();
    const auto path = eval_path(config, name);
    guard_input(config, path, "evaluation", name, "eval", std::nullopt);
    reports.push_back(eval::report_from_json(read_text_file(path)));
    evals.push_back({name, sha256_file(path)});
  }
  parts["evals"] = std::move(evals);
  const auto key = key_of(parts);
  const auto dir = report_dir(config);
  const auto marker = dir / "report.csv";
  guard_output(config, marker, key);

  auto written = eval::emit_reports(reports, dir);
  // Re-stamp report.csv so later runs can detect a configuration change.
  write_artifact(marker, read_text_file(marker), "report", "all", key);
  return written;
}

std::vector<vectorstore::SearchHit> dump_neighbors(const RunConfig& config, const std::string& method,
                                                   const std::string& query_text, std::size_t k) {
  const auto name = sampling::SamplingMethodSpec::parse(method).name();
  const auto path = index_path(config, name);
  if (!fs::exists(path)) throw StageError("index not found for method " + name + " (expected " + path.string() + ")");
  const auto provider = make_provider(config);
  if (!provider) throw ValidationError("an embedding source is required (--embeddings or --service-url)");
  const auto index = vectorstore::HnswIndex::load(path, config.index.dim);
  const auto rec = provider->get_text_embedding(query_text, config.index_model);
  const auto q = embeddings::l2_normalize(std::span<const float>(rec.vector));
  return index.search(q, k, config.index.ef_search);
}

}  // namespace framesift::pipeline
