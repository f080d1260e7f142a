#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace framesift {

// Little-endian encoders used by the on-disk formats. Everything written
// through these helpers is byte-identical across hosts.
class ByteWriter {
 public:
  void u8(std::uint8_t v) { buf_.push_back(static_cast<std::byte>(v)); }
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
  void f32(float v);
  void f32s(std::span<const float> values);
  void str(const std::string& s);
  void raw(std::span<const std::byte> bytes);

  const std::vector<std::byte>& bytes() const { return buf_; }

 private:
  std::vector<std::byte> buf_;
};

// Bounds-checked reader; every overrun throws `IoError` with `what`
// describing the truncated field.
class ByteReader {
 public:
  explicit ByteReader(std::span<const std::byte> bytes) : bytes_(bytes) {}

  std::uint8_t u8();
  std::uint32_t u32();
  std::uint64_t u64();
  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
  float f32();
  void f32s(std::span<float> out);
  std::string str();
  std::span<const std::byte> raw(std::size_t n);

  std::size_t offset() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n) const;

  std::span<const std::byte> bytes_;
  std::size_t pos_ = 0;
};

/// Encodes floats as little-endian IEEE-754 binary32.
std::vector<std::byte> encode_f32_le(std::span<const float> values);
/// Inverse of encode_f32_le; `bytes.size()` must be a multiple of 4.
std::vector<float> decode_f32_le(std::span<const std::byte> bytes);

std::vector<std::byte> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::byte> bytes);
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace framesift
