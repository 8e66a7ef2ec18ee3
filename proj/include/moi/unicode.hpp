#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace moi::uni {

// Decodes UTF-8 into codepoints. Invalid byte sequences decode to U+FFFD,
// one replacement per offending byte.
std::u32string decode_utf8(std::string_view s);

std::string encode_utf8(std::u32string_view cps);

void append_utf8(std::string& out, char32_t cp);

// Canonical normalization (decompose, reorder, compose). Covers the full
// Unicode range including algorithmic Hangul.
std::string nfc(std::string_view s);

std::string nfd(std::string_view s);

// Replaces non-ASCII characters by their unaccented ASCII counterparts and
// drops anything without one (combining marks, Greek, CJK, ...). Latin
// ligatures and crossed letters map through a small explicit table.
std::string ascii_fold(std::string_view s);

}  // namespace moi::uni
