#include <algorithm>

#include "framesift/embeddings.hpp"
#include "framesift/hashing.hpp"

namespace framesift::embeddings {

namespace fs = std::filesystem;

MissingKeyError::MissingKeyError(std::string model_id, std::vector<std::string> missing)
    : Error("missing_embedding", [&] {
        std::string msg = "no '" + model_id + "' embedding for " + std::to_string(missing.size()) + " key(s):";
        const std::size_t shown = std::min<std::size_t>(missing.size(), 10);
        for (std::size_t i = 0; i < shown; ++i) msg += " " + missing[i];
        if (shown < missing.size()) msg += " ...";
        return msg;
      }()),
      missing_(std::move(missing)) {}

std::vector<EmbeddingRecord> EmbeddingProvider::get_text_embeddings(std::span<const std::string> texts,
                                                                    std::string_view model_id) const {
  std::vector<EmbeddingRecord> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(get_text_embedding(t, model_id));
  return out;
}

FileEmbeddingProvider FileEmbeddingProvider::from_directory(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("embedding directory not found: " + dir.string());
  std::vector<fs::path> manifests;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().string().ends_with(kManifestSuffix)) manifests.push_back(entry.path());
  }
  std::sort(manifests.begin(), manifests.end());
  FileEmbeddingProvider provider;
  for (const auto& m : manifests) {
    provider.add_file(read_embedding_file(m));
    provider.digests_.push_back(sha256_file(m));
  }
  return provider;
}

void FileEmbeddingProvider::add_file(const EmbeddingFile& file) {
  auto& store = models_[file.model_id];
  if (store.dim != 0 && store.dim != file.dim) {
    throw EmbeddingFileError(EmbeddingFileError::Code::dim_conflict,
                             "model '" + file.model_id + "' has files with dims " + std::to_string(store.dim) +
                                 " and " + std::to_string(file.dim));
  }
  store.dim = file.dim;
  for (std::size_t i = 0; i < file.count(); ++i) {
    const auto row = file.row(i);
    std::vector<float> v(row.begin(), row.end());
    if (const auto* f = std::get_if<FrameKey>(&file.keys[i])) {
      store.frames.insert_or_assign(*f, std::move(v));
    } else {
      store.texts.insert_or_assign(std::get<QueryKey>(file.keys[i]).text, std::move(v));
    }
  }
}

bool FileEmbeddingProvider::has_model(std::string_view model_id) const { return models_.contains(model_id); }

std::size_t FileEmbeddingProvider::dim(std::string_view model_id) const {
  auto it = models_.find(model_id);
  return it == models_.end() ? 0 : it->second.dim;
}

std::vector<EmbeddingRecord> FileEmbeddingProvider::get_frame_embeddings(std::span<const corpus::FrameRef> frames,
                                                                         std::string_view model_id) const {
  auto it = models_.find(model_id);
  std::vector<EmbeddingRecord> out;
  std::vector<std::string> missing;
  out.reserve(frames.size());
  for (const auto& f : frames) {
    FrameKey key{f.video_id, f.frame_index};
    if (it != models_.end()) {
      if (auto v = it->second.frames.find(key); v != it->second.frames.end()) {
        out.push_back({key, std::string(model_id), v->second});
        continue;
      }
    }
    missing.push_back(describe(key));
  }
  if (!missing.empty()) throw MissingKeyError(std::string(model_id), std::move(missing));
  return out;
}

EmbeddingRecord FileEmbeddingProvider::get_text_embedding(std::string_view text, std::string_view model_id) const {
  auto it = models_.find(model_id);
  if (it != models_.end()) {
    if (auto v = it->second.texts.find(text); v != it->second.texts.end()) {
      return {QueryKey{"", std::string(text)}, std::string(model_id), v->second};
    }
  }
  throw MissingKeyError(std::string(model_id), {"text \"" + std::string(text) + "\""});
}

}  // namespace framesift::embeddings
