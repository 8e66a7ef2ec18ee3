#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace moi::text {

// Query/document analyzer: ASCII-fold, lowercase, split on non-alphanumerics,
// drop stop words (checked on both the surface form and the stem), then stem.
// Re-analyzing an analyzed stream is a fixed point.
std::vector<std::string> analyze(std::string_view text);

struct TextQuery {
    std::string raw;
    std::vector<std::string> tokens;
};

TextQuery make_query(std::string_view raw);  // tokens may be empty

// Classic five-step English suffix stripper. Expects a lowercase ASCII word.
std::string stem(std::string_view word);

bool is_stop_word(std::string_view word);

}  // namespace moi::text
