#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace moi {

// The recognized presentation-MathML element set. Anything outside this list
// is stripped during cleaning and recorded on the tree for the filter.
enum class Tag : uint8_t {
    mi, mo, mn, mtext, ms,                                   // token leaves
    mspace, mprescripts, none,                               // empty leaves
    mrow, msub, msup, msubsup, mfrac, msqrt, mroot,          // containers
    mover, munder, munderover, mtable, mtr, mtd,
    mstyle, mpadded, menclose, mphantom, merror, mmultiscripts,
};

std::string_view tag_name(Tag tag);
std::optional<Tag> tag_from_name(std::string_view name);

bool is_token_tag(Tag tag);   // holds text content
bool is_empty_tag(Tag tag);   // mspace, mprescripts, none
bool is_container_tag(Tag tag);

// Classification of an <mo> leaf carrying an invisible operator, assigned by
// normalize_invisible_operators and consumed by key serialization.
enum class OperatorKind : uint8_t { plain, invisible_times, function_application };

constexpr char32_t kInvisibleTimes = 0x2062;
constexpr char32_t kFunctionApplication = 0x2061;

struct MathNode {
    Tag tag = Tag::mrow;
    std::string content;              // token leaves only, NFC-normalized
    std::vector<MathNode> children;   // containers only
    OperatorKind op = OperatorKind::plain;

    bool operator==(const MathNode&) const = default;
};

// A cleaned expression: the single child of the <math> element (multiple
// children get wrapped in a synthetic mrow). `foreign_tags` lists element
// names outside the recognized set that cleaning removed, with multiplicity;
// stray character data inside containers is recorded as "#text". A tree with
// a childless container root only occurs when cleaning removed everything —
// the filter rejects it before it can reach extraction.
struct MathTree {
    MathNode root;
    std::optional<std::string> source_tex;
    std::vector<std::string> foreign_tags;

    bool operator==(const MathTree&) const = default;
};

enum class RejectReason : uint8_t {
    footnote_pattern,
    svg_content,
    unknown_tag,
    empty_after_clean,
};

std::string_view reject_reason_name(RejectReason reason);

struct FilterVerdict {
    bool keep = true;
    std::optional<RejectReason> reason;

    static FilterVerdict kept() { return {true, std::nullopt}; }
    static FilterVerdict rejected(RejectReason r) { return {false, r}; }
};

// Parses MathML markup into a cleaned presentation tree: semantics wrappers
// and annotations removed (TeX preserved in source_tex), attributes dropped,
// token content whitespace-collapsed and NFC-normalized.
// Throws ParseError on malformed XML, EmptyExpressionError when the <math>
// element has no element content at all.
MathTree parse_mathml(std::string_view xml_text);

// Corpus hygiene: rejects footnote-mark artifacts (TeX matching {}^{...}, or
// an msup with an empty base when no TeX is available), stripped SVG content,
// and any other stripped foreign tag. Total; never throws.
FilterVerdict filter_formula(const MathTree& tree);

// Marks <mo> leaves whose content is exactly U+2062 or U+2061.
MathTree normalize_invisible_operators(MathTree tree);

// Cleaned tree back to markup. source_tex, when present, is emitted as the
// alttext attribute so that parse(to_xml(t)) == t.
std::string to_xml(const MathTree& tree);

size_t node_count(const MathNode& node);

}  // namespace moi
