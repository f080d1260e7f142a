#include <set>

#include "json.hpp"

#include "framesift/binary_io.hpp"
#include "framesift/embeddings.hpp"
#include "framesift/hashing.hpp"

namespace framesift::embeddings {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kFormatVersion = 1;

json key_to_json(const EmbeddingKey& key) {
  if (const auto* f = std::get_if<FrameKey>(&key)) return {{"video_id", f->video_id}, {"frame_index", f->frame_index}};
  const auto& q = std::get<QueryKey>(key);
  return {{"query_id", q.query_id}, {"text", q.text}};
}

EmbeddingKey key_from_json(const json& j) {
  if (j.contains("video_id")) return FrameKey{j.at("video_id").get<std::string>(), j.at("frame_index").get<int>()};
  return QueryKey{j.at("query_id").get<std::string>(), j.value("text", std::string{})};
}

// Query keys are unique by id; the text is payload.
std::string identity(const EmbeddingKey& key) {
  if (const auto* f = std::get_if<FrameKey>(&key)) return "f:" + f->video_id + "#" + std::to_string(f->frame_index);
  return "q:" + std::get<QueryKey>(key).query_id;
}

fs::path strip_suffix(const fs::path& p) {
  const auto s = p.string();
  for (auto suffix : {kManifestSuffix, kPayloadSuffix}) {
    if (s.ends_with(suffix)) return s.substr(0, s.size() - suffix.size());
  }
  return p;
}

}  // namespace

EmbeddingFileError::EmbeddingFileError(Code code, const std::string& message)
    : Error("embedding_file." + std::string(to_string(code)), message), code_(code) {}

std::string_view to_string(EmbeddingFileError::Code code) {
  using C = EmbeddingFileError::Code;
  switch (code) {
    case C::checksum_mismatch: return "checksum_mismatch";
    case C::truncated_payload: return "truncated_payload";
    case C::dim_conflict: return "dim_conflict";
    case C::duplicate_key: return "duplicate_key";
    case C::malformed: return "malformed";
  }
  return "unknown";
}

std::string describe(const EmbeddingKey& key) {
  if (const auto* f = std::get_if<FrameKey>(&key)) return "(" + f->video_id + ", " + std::to_string(f->frame_index) + ")";
  return "query " + std::get<QueryKey>(key).query_id;
}

std::vector<EmbeddingRecord> EmbeddingFile::records() const {
  std::vector<EmbeddingRecord> out;
  out.reserve(count());
  for (std::size_t i = 0; i < count(); ++i) {
    const auto r = row(i);
    out.push_back({keys[i], model_id, {r.begin(), r.end()}});
  }
  return out;
}

void write_embedding_file(const fs::path& base_in, std::span<const EmbeddingRecord> records, bool normalized) {
  using C = EmbeddingFileError::Code;
  const auto base = strip_suffix(base_in);
  if (records.empty()) throw EmbeddingFileError(C::malformed, "refusing to write an empty embedding file");
  const auto& model_id = records.front().model_id;
  const auto dim = records.front().dim();
  if (dim == 0) throw EmbeddingFileError(C::dim_conflict, "embedding dimension must be positive");

  std::vector<float> payload;
  payload.reserve(records.size() * dim);
  std::set<std::string> seen;
  json keys = json::array();
  for (const auto& rec : records) {
    if (rec.model_id != model_id) {
      throw EmbeddingFileError(C::malformed, "mixed model ids '" + model_id + "' and '" + rec.model_id + "'");
    }
    if (rec.dim() != dim) {
      throw EmbeddingFileError(C::dim_conflict, "record " + describe(rec.key) + " has dim " +
                                                    std::to_string(rec.dim()) + ", expected " + std::to_string(dim));
    }
    if (!seen.insert(identity(rec.key)).second) {
      throw EmbeddingFileError(C::duplicate_key, "duplicate key " + describe(rec.key));
    }
    keys.push_back(key_to_json(rec.key));
    payload.insert(payload.end(), rec.vector.begin(), rec.vector.end());
  }

  const auto bytes = encode_f32_le(payload);
  json manifest = {
      {"format", "framesift-embeddings"},
      {"version", kFormatVersion},
      {"model_id", model_id},
      {"dim", dim},
      {"count", records.size()},
      {"normalized", normalized},
      {"dtype", "float32"},
      {"byte_order", "little"},
      {"payload_sha256", sha256_hex(bytes)},
      {"keys", std::move(keys)},
  };
  write_file_bytes(base.string() + std::string(kPayloadSuffix), bytes);
  write_text_file(base.string() + std::string(kManifestSuffix), manifest.dump(1) + "\n");
}

EmbeddingFile read_embedding_file(const fs::path& base_or_manifest) {
  using C = EmbeddingFileError::Code;
  const auto base = strip_suffix(base_or_manifest);
  const fs::path manifest_path = base.string() + std::string(kManifestSuffix);
  const fs::path payload_path = base.string() + std::string(kPayloadSuffix);

  json manifest;
  try {
    manifest = json::parse(read_text_file(manifest_path));
  } catch (const json::exception& e) {
    throw EmbeddingFileError(C::malformed, "cannot parse " + manifest_path.string() + ": " + e.what());
  }

  EmbeddingFile file;
  std::size_t count = 0;
  std::string checksum;
  try {
    if (manifest.at("version").get<int>() != kFormatVersion) {
      throw EmbeddingFileError(C::malformed, "unsupported embedding file version in " + manifest_path.string());
    }
    file.model_id = manifest.at("model_id").get<std::string>();
    file.dim = manifest.at("dim").get<std::size_t>();
    count = manifest.at("count").get<std::size_t>();
    file.normalized = manifest.at("normalized").get<bool>();
    checksum = manifest.at("payload_sha256").get<std::string>();
    for (const auto& k : manifest.at("keys")) file.keys.push_back(key_from_json(k));
  } catch (const json::exception& e) {
    throw EmbeddingFileError(C::malformed, "malformed manifest " + manifest_path.string() + ": " + e.what());
  }
  if (file.dim == 0) throw EmbeddingFileError(C::dim_conflict, manifest_path.string() + ": dim must be positive");
  if (file.keys.size() != count) {
    throw EmbeddingFileError(C::malformed, manifest_path.string() + ": count " + std::to_string(count) + " but " +
                                               std::to_string(file.keys.size()) + " keys");
  }
  std::set<std::string> seen;
  for (const auto& k : file.keys) {
    if (!seen.insert(identity(k)).second) {
      throw EmbeddingFileError(C::duplicate_key, manifest_path.string() + ": duplicate key " + describe(k));
    }
  }

  const auto bytes = read_file_bytes(payload_path);
  const std::size_t expected = count * file.dim * 4;
  if (bytes.size() < expected) {
    throw EmbeddingFileError(C::truncated_payload, payload_path.string() + ": " + std::to_string(bytes.size()) +
                                                       " bytes, manifest requires " + std::to_string(expected));
  }
  if (bytes.size() > expected) {
    throw EmbeddingFileError(C::malformed, payload_path.string() + ": " + std::to_string(bytes.size() - expected) +
                                               " trailing bytes beyond the declared payload");
  }
  if (sha256_hex(bytes) != checksum) {
    throw EmbeddingFileError(C::checksum_mismatch, payload_path.string() + ": payload checksum mismatch");
  }
  file.payload = decode_f32_le(bytes);
  return file;
}

}  // namespace framesift::embeddings
