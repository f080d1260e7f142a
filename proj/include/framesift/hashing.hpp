#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

namespace framesift {

/// Lowercase hex SHA-256 of a byte buffer.
std::string sha256_hex(std::span<const std::byte> bytes);
std::string sha256_hex(std::string_view text);

/// Lowercase hex SHA-256 of a file's contents. Throws IoError if unreadable.
std::string sha256_file(const std::filesystem::path& path);

}  // namespace framesift
