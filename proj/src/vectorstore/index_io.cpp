#include <cstring>

#include "framesift/binary_io.hpp"
#include "framesift/hashing.hpp"
#include "framesift/vectorstore.hpp"

namespace framesift::vectorstore {

namespace {

constexpr char kMagic[8] = {'F', 'S', 'H', 'N', 'S', 'W', 'I', 'X'};
constexpr std::uint32_t kVersion = 1;
constexpr std::size_t kDigestChars = 64;

}  // namespace

std::vector<std::byte> HnswIndex::serialize() const {
  ByteWriter w;
  w.raw(std::as_bytes(std::span(kMagic)));
  w.u32(kVersion);
  w.u64(config_.dim);
  w.u32(static_cast<std::uint32_t>(config_.m));
  w.u32(static_cast<std::uint32_t>(config_.ef_construction));
  w.u32(static_cast<std::uint32_t>(config_.ef_search));
  w.u64(config_.seed);

  const auto n = table_.size();
  w.u64(n);
  for (const auto& e : table_.entries()) {
    w.str(e.video_id);
    w.i32(e.frame_index);
    w.str(e.category);
  }
  w.f32s(table_.data());

  w.i32(static_cast<std::int32_t>(entry_point_));
  w.i32(max_level_);
  for (std::size_t i = 0; i < n; ++i) {
    w.u32(static_cast<std::uint32_t>(levels_[i]));
    for (const auto& layer : links_[i]) {
      w.u32(static_cast<std::uint32_t>(layer.size()));
      for (const auto nb : layer) w.u32(nb);
    }
  }
  auto bytes = w.bytes();
  const auto digest = sha256_hex(bytes);
  const auto* d = reinterpret_cast<const std::byte*>(digest.data());
  bytes.insert(bytes.end(), d, d + digest.size());
  return bytes;
}

HnswIndex HnswIndex::deserialize(std::span<const std::byte> bytes, std::optional<std::size_t> expected_dim) {
  if (bytes.size() < sizeof kMagic + kDigestChars || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) {
    throw VectorStoreError("not an index file (bad magic)");
  }
  const auto body = bytes.first(bytes.size() - kDigestChars);
  const auto trailer = bytes.last(kDigestChars);
  if (sha256_hex(body) != std::string(reinterpret_cast<const char*>(trailer.data()), kDigestChars)) {
    throw VectorStoreError("index file is corrupted (checksum mismatch)");
  }

  ByteReader r(body);
  HnswIndex index;
  try {
    r.raw(sizeof kMagic);
    if (const auto v = r.u32(); v != kVersion) {
      throw VectorStoreError("unsupported index version " + std::to_string(v));
    }
    auto& c = index.config_;
    c.dim = r.u64();
    c.m = static_cast<int>(r.u32());
    c.ef_construction = static_cast<int>(r.u32());
    c.ef_search = static_cast<int>(r.u32());
    c.seed = r.u64();
    c.validate();
    if (expected_dim && *expected_dim != c.dim) {
      throw VectorStoreError("index has dim " + std::to_string(c.dim) + ", expected " + std::to_string(*expected_dim));
    }

    const auto n = r.u64();
    if (n > r.remaining()) throw VectorStoreError("index entry count exceeds file size");
    auto& t = index.table_;
    t.dim_ = c.dim;
    t.entries_.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
      FrameVectorEntry e;
      e.entry_id = static_cast<std::int64_t>(i);
      e.video_id = r.str();
      e.frame_index = r.i32();
      e.category = r.str();
      if (!t.keys_.emplace(std::make_pair(e.video_id, e.frame_index), i).second) {
        throw VectorStoreError("index file repeats frame (" + e.video_id + ", " + std::to_string(e.frame_index) + ")");
      }
      t.entries_.push_back(std::move(e));
    }
    if (n * c.dim * sizeof(float) > r.remaining()) throw VectorStoreError("index vector payload is truncated");
    t.data_.resize(n * c.dim);
    r.f32s(t.data_);

    index.entry_point_ = r.i32();
    index.max_level_ = r.i32();
    if ((n == 0) != (index.entry_point_ < 0) || index.entry_point_ >= static_cast<std::int64_t>(n)) {
      throw VectorStoreError("index entry point out of range");
    }
    index.levels_.resize(n);
    index.links_.resize(n);
    for (std::uint64_t i = 0; i < n; ++i) {
      const auto level = static_cast<int>(r.u32());
      if (level > index.max_level_) throw VectorStoreError("node level exceeds index max level");
      index.levels_[i] = level;
      index.links_[i].resize(static_cast<std::size_t>(level) + 1);
      for (int l = 0; l <= level; ++l) {
        const auto count = r.u32();
        if (count > index.max_degree(l)) throw VectorStoreError("node degree exceeds the configured maximum");
        auto& layer = index.links_[i][l];
        layer.resize(count);
        for (auto& nb : layer) {
          nb = r.u32();
          if (nb >= n) throw VectorStoreError("neighbour id out of range");
        }
      }
    }
    if (r.remaining() != 0) throw VectorStoreError("trailing bytes after index graph");
  } catch (const IoError& e) {
    throw VectorStoreError(std::string("index file is truncated: ") + e.what());
  }
  return index;
}

void HnswIndex::save(const std::filesystem::path& path) const { write_file_bytes(path, serialize()); }

HnswIndex HnswIndex::load(const std::filesystem::path& path, std::optional<std::size_t> expected_dim) {
  if (!std::filesystem::exists(path)) throw VectorStoreError("index file not found: " + path.string());
  return deserialize(read_file_bytes(path), expected_dim);
}

}  // namespace framesift::vectorstore
