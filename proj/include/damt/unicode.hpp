#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace damt::uni {

struct DecodeResult {
  std::vector<char32_t> codepoints;
  bool ok = true;
  std::size_t error_byte = 0;  // byte offset of the first invalid sequence
};

// Strict UTF-8 decoding: overlong encodings, surrogates, and codepoints past
// U+10FFFF are rejected.
DecodeResult decode_utf8(std::string_view bytes);

void append_utf8(std::string& out, char32_t cp);
std::string encode_utf8(const std::vector<char32_t>& cps);

bool is_whitespace(char32_t cp);

// One-to-one lowercase mapping covering ASCII, Latin-1, Latin Extended-A and
// Cyrillic; other codepoints map to themselves.
char32_t to_lower(char32_t cp);

// Lowercases a valid UTF-8 string; input is assumed validated.
std::string lowercase_utf8(std::string_view bytes);

// Number of codepoints in a valid UTF-8 string.
std::size_t codepoint_count(std::string_view bytes);

}  // namespace damt::uni
