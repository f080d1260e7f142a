#include <regex>
#include <thread>

#include "httplib.h"
#include "json.hpp"

#include "framesift/embeddings.hpp"
#include "framesift/parallel.hpp"

namespace framesift::embeddings {

using nlohmann::json;

ServiceEmbeddingProvider::ServiceEmbeddingProvider(std::string base_url, ServiceOptions options)
    : options_(options) {
  static const std::regex re(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(base_url, m, re)) throw InvalidArgument("invalid service url: " + base_url);
  if (m[1].str().starts_with("https")) throw InvalidArgument("https service urls are not supported: " + base_url);
  scheme_host_port_ = m[1].str();
  path_prefix_ = m[2].matched ? m[2].str() : "";
  while (path_prefix_.ends_with('/')) path_prefix_.pop_back();
  if (options_.batch_size == 0) throw InvalidArgument("service batch size must be positive");
  if (options_.max_parallel < 1) options_.max_parallel = 1;
}

std::vector<std::vector<float>> ServiceEmbeddingProvider::post_once(const std::string& endpoint,
                                                                    const std::string& field,
                                                                    std::span<const std::string> items,
                                                                    std::string_view model_id) const {
  httplib::Client client(scheme_host_port_);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(options_.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(options_.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  const json body = {{"model_id", model_id}, {field, std::vector<std::string>(items.begin(), items.end())}};
  const auto path = path_prefix_ + endpoint;
  auto res = client.Post(path, body.dump(), "application/json");
  if (!res) throw TransportError("POST " + path + " failed: " + httplib::to_string(res.error()));
  if (res->status >= 500) {
    throw TransportError("POST " + path + " returned HTTP " + std::to_string(res->status));
  }
  if (res->status != 200) {
    throw ServiceDataError("POST " + path + " returned HTTP " + std::to_string(res->status) + ": " + res->body);
  }

  json reply;
  try {
    reply = json::parse(res->body);
  } catch (const json::exception& e) {
    throw ServiceDataError("POST " + path + " returned invalid JSON: " + e.what());
  }
  std::vector<std::vector<float>> vectors;
  std::size_t dim = 0;
  try {
    dim = reply.at("dim").get<std::size_t>();
    vectors = reply.at("vectors").get<std::vector<std::vector<float>>>();
  } catch (const json::exception& e) {
    throw ServiceDataError("POST " + path + " reply is missing dim/vectors: " + e.what());
  }
  if (vectors.size() != items.size()) {
    throw ServiceDataError("POST " + path + " returned " + std::to_string(vectors.size()) + " vectors for " +
                           std::to_string(items.size()) + " inputs");
  }
  for (const auto& v : vectors) {
    if (v.size() != dim || dim == 0) {
      throw ServiceDataError("POST " + path + " returned a vector of dim " + std::to_string(v.size()) +
                             ", declared " + std::to_string(dim));
    }
  }
  if (const auto want = known_dim(model_id); want != 0 && dim != want) {
    throw ServiceDataError("model '" + std::string(model_id) + "' should produce dim " + std::to_string(want) +
                           ", service returned " + std::to_string(dim));
  }
  return vectors;
}

std::vector<std::vector<float>> ServiceEmbeddingProvider::post_batched(const std::string& endpoint,
                                                                       const std::string& field,
                                                                       std::span<const std::string> items,
                                                                       std::string_view model_id) const {
  const std::size_t batches = (items.size() + options_.batch_size - 1) / options_.batch_size;
  std::vector<std::vector<std::vector<float>>> parts(batches);
  parallel_for(batches, options_.max_parallel, [&](std::size_t b) {
    const auto begin = b * options_.batch_size;
    const auto len = std::min(options_.batch_size, items.size() - begin);
    for (int attempt = 0;; ++attempt) {
      try {
        parts[b] = post_once(endpoint, field, items.subspan(begin, len), model_id);
        return;
      } catch (const TransportError&) {
        if (attempt >= options_.retries) throw;
        std::this_thread::sleep_for(std::chrono::milliseconds(100) * (attempt + 1));
      }
    }
  });

  std::vector<std::vector<float>> out;
  out.reserve(items.size());
  std::size_t dim = 0;
  for (auto& part : parts) {
    for (auto& v : part) {
      if (dim == 0) dim = v.size();
      if (v.size() != dim) throw ServiceDataError("service returned inconsistent dims across batches");
      out.push_back(std::move(v));
    }
  }
  return out;
}

std::vector<EmbeddingRecord> ServiceEmbeddingProvider::get_frame_embeddings(std::span<const corpus::FrameRef> frames,
                                                                            std::string_view model_id) const {
  std::vector<std::string> uris;
  uris.reserve(frames.size());
  for (const auto& f : frames) uris.push_back(f.uri);
  auto vectors = post_batched("/embed/image", "uris", uris, model_id);
  std::vector<EmbeddingRecord> out;
  out.reserve(frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    out.push_back({FrameKey{frames[i].video_id, frames[i].frame_index}, std::string(model_id), std::move(vectors[i])});
  }
  return out;
}

std::vector<EmbeddingRecord> ServiceEmbeddingProvider::get_text_embeddings(std::span<const std::string> texts,
                                                                           std::string_view model_id) const {
  auto vectors = post_batched("/embed/text", "texts", texts, model_id);
  std::vector<EmbeddingRecord> out;
  out.reserve(texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) {
    out.push_back({QueryKey{"", texts[i]}, std::string(model_id), std::move(vectors[i])});
  }
  return out;
}

EmbeddingRecord ServiceEmbeddingProvider::get_text_embedding(std::string_view text, std::string_view model_id) const {
  const std::string t(text);
  return std::move(get_text_embeddings(std::span(&t, 1), model_id).front());
}

}  // namespace framesift::embeddings
