// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace tibcorpus::utf8 {

/// Decodes UTF-8 bytes into codepoints. Throws std::invalid_argument on
/// malformed input (overlong forms, surrogates, truncated sequences).
std::u32string decode(std::string_view bytes);

/// Decodes UTF-8 bytes, replacing every malformed sequence with U+FFFD.
std::u32string decode_lossy(std::string_view bytes);

/// Encodes codepoints back to UTF-8 bytes.
std::string encode(std::u32string_view codepoints);

/// Appends one codepoint as UTF-8.
void append(std::string& out, char32_t cp);

/// Number of codepoints in a UTF-8 string (lossy: malformed bytes count as
/// one replacement codepoint each).
std::size_t count_codepoints(std::string_view bytes);

/// True if the bytes form valid UTF-8.
bool is_valid(std::string_view bytes);

/// Replaces malformed sequences with U+FFFD; returns input unchanged when
/// already valid.
std::string sanitize(std::string_view bytes);

}  // namespace tibcorpus::utf8
