#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace claimex {

// Hex-encoded SHA-256 of the input bytes.
std::string sha256_hex(std::string_view data);

// Digest of a field sequence with unambiguous framing (length-prefixed
// concatenation), so ("ab","c") and ("a","bc") hash differently.
std::string sha256_fields(const std::vector<std::string>& fields);

}  // namespace claimex
