#pragma once

#include <string>
#include <string_view>

namespace las {

// Lowercase 64-hex-character SHA-256 digest of the UTF-8 bytes.
std::string sha256_hex(std::string_view data);

}  // namespace las
