#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace livekv {

/// A 16-byte MD5 digest.
using Digest = std::array<std::uint8_t, 16>;

Digest md5(std::span<const std::uint8_t> bytes);
Digest md5(std::string_view bytes);

/// Lowercase hexadecimal rendering, 32 characters.
std::string to_hex(const Digest& digest);

}  // namespace livekv
