#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>

namespace imtriage::util {

using Digest = std::array<uint8_t, 32>;

Digest sha256_bytes(std::span<const uint8_t> data);
Digest sha256_string(std::string_view data);
/// Streams the file; never maps or modifies it.
Digest sha256_file(const std::filesystem::path& path);

std::string digest_hex(const Digest& d);

}  // namespace imtriage::util
