#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace moi::xml {

// One parsed element. Namespace prefixes are stripped from names; `text`
// concatenates all character data directly inside the element (entities
// decoded), which is all the MathML token model needs.
struct Element {
    std::string name;
    std::vector<std::pair<std::string, std::string>> attributes;
    std::vector<Element> children;
    std::string text;

    const std::string* attribute(std::string_view name) const;
};

// Parses a standalone XML document (prolog, comments, CDATA, the five
// predefined entities plus numeric references). Throws moi::ParseError with
// a byte offset on malformed input. Non-validating; DOCTYPE is not supported.
Element parse(std::string_view input);

std::string escape_text(std::string_view s);
std::string escape_attribute(std::string_view s);

}  // namespace moi::xml
