#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace vidsearch {

// ASCII lowercase; bytes >= 0x80 pass through untouched.
std::string to_lower(std::string_view text);

// Lowercases and splits on every run of non-alphanumeric ASCII bytes.
// Non-ASCII bytes count as alphanumeric so UTF-8 words stay whole.
std::vector<std::string> tokenize_text(std::string_view text);

}  // namespace vidsearch
