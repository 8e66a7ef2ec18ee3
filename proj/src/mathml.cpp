#include "moi/mathml.hpp"

#include <algorithm>
#include <array>

#include "moi/errors.hpp"
#include "moi/unicode.hpp"
#include "moi/xml.hpp"

namespace moi {

namespace {

struct TagInfo {
    Tag tag;
    std::string_view name;
};

constexpr std::array<TagInfo, 27> kTags = {{
    {Tag::mi, "mi"},
    {Tag::mo, "mo"},
    {Tag::mn, "mn"},
    {Tag::mtext, "mtext"},
    {Tag::ms, "ms"},
    {Tag::mspace, "mspace"},
    {Tag::mprescripts, "mprescripts"},
    {Tag::none, "none"},
    {Tag::mrow, "mrow"},
    {Tag::msub, "msub"},
    {Tag::msup, "msup"},
    {Tag::msubsup, "msubsup"},
    {Tag::mfrac, "mfrac"},
    {Tag::msqrt, "msqrt"},
    {Tag::mroot, "mroot"},
    {Tag::mover, "mover"},
    {Tag::munder, "munder"},
    {Tag::munderover, "munderover"},
    {Tag::mtable, "mtable"},
    {Tag::mtr, "mtr"},
    {Tag::mtd, "mtd"},
    {Tag::mstyle, "mstyle"},
    {Tag::mpadded, "mpadded"},
    {Tag::menclose, "menclose"},
    {Tag::mphantom, "mphantom"},
    {Tag::merror, "merror"},
    {Tag::mmultiscripts, "mmultiscripts"},
}};

bool is_ws(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
}

// XML whitespace handling for token content: trim, collapse runs to a space.
std::string collapse_ws(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    size_t i = 0, n = s.size();
    while (n > i && is_ws(s[n - 1])) --n;
    while (i < n && is_ws(s[i])) ++i;
    bool in_run = false;
    for (; i < n; ++i) {
        if (is_ws(s[i])) {
            in_run = true;
        } else {
            if (in_run) out += ' ';
            in_run = false;
            out += s[i];
        }
    }
    return out;
}

bool has_non_ws(std::string_view s) {
    return std::any_of(s.begin(), s.end(), [](char c) { return !is_ws(c); });
}

class Cleaner {
public:
    explicit Cleaner(MathTree& tree) : tree_(tree) {}

    // Cleans one raw element into zero or more MathNodes appended to `out`.
    void clean_into(const xml::Element& el, std::vector<MathNode>& out) {
        if (el.name == "semantics") {
            unwrap_semantics(el, out);
            return;
        }
        if (el.name == "annotation" || el.name == "annotation-xml") {
            capture_tex(el);
            return;
        }
        auto tag = tag_from_name(el.name);
        if (!tag) {
            tree_.foreign_tags.push_back(el.name);
            return;
        }
        MathNode node;
        node.tag = *tag;
        if (is_token_tag(*tag)) {
            node.content = uni::nfc(collapse_ws(el.text));
            // Child elements inside a token (mglyph etc.) are not recognized.
            for (const auto& child : el.children) tree_.foreign_tags.push_back(child.name);
        } else if (is_empty_tag(*tag)) {
            if (has_non_ws(el.text)) tree_.foreign_tags.push_back("#text");
            for (const auto& child : el.children) tree_.foreign_tags.push_back(child.name);
        } else {
            if (has_non_ws(el.text)) tree_.foreign_tags.push_back("#text");
            for (const auto& child : el.children) clean_into(child, node.children);
        }
        out.push_back(std::move(node));
    }

private:
    // The first non-annotation child of <semantics> is the annotated
    // presentation branch; everything else is parallel markup.
    void unwrap_semantics(const xml::Element& el, std::vector<MathNode>& out) {
        bool taken = false;
        for (const auto& child : el.children) {
            if (child.name == "annotation" || child.name == "annotation-xml") {
                capture_tex(child);
            } else if (!taken) {
                clean_into(child, out);
                taken = true;
            }
        }
    }

    void capture_tex(const xml::Element& annotation) {
        if (tree_.source_tex) return;
        const std::string* enc = annotation.attribute("encoding");
        if (enc && (*enc == "application/x-tex" || *enc == "TeX")) {
            tree_.source_tex = uni::nfc(annotation.text);
        }
    }

    MathTree& tree_;
};

bool matches_footnote_tex(std::string_view tex) {
    size_t i = 0, n = tex.size();
    while (i < n && is_ws(tex[i])) ++i;
    while (n > i && is_ws(tex[n - 1])) --n;
    // {}^{...}
    if (n - i < 5 || tex[i] != '{' || tex[i + 1] != '}') return false;
    i += 2;
    while (i < n && is_ws(tex[i])) ++i;
    if (i >= n || tex[i] != '^') return false;
    ++i;
    while (i < n && is_ws(tex[i])) ++i;
    return i < n && tex[i] == '{' && tex[n - 1] == '}';
}

// Footnote marks without a TeX attribute: a superscript on an empty base.
bool is_empty_base_superscript(const MathNode& node) {
    if (node.tag == Tag::msup && !node.children.empty()) {
        const MathNode& base = node.children.front();
        if (base.tag == Tag::mrow && base.children.empty()) return true;
    }
    return std::any_of(node.children.begin(), node.children.end(), is_empty_base_superscript);
}

bool is_svg_name(std::string_view name) {
    return name == "svg" || name == "SVG";
}

void write_xml(const MathNode& node, std::string& out) {
    std::string_view name = tag_name(node.tag);
    if (is_empty_tag(node.tag) || (is_token_tag(node.tag) && node.content.empty())) {
        out += '<';
        out += name;
        out += "/>";
        return;
    }
    out += '<';
    out += name;
    out += '>';
    if (is_token_tag(node.tag)) {
        out += xml::escape_text(node.content);
    } else {
        for (const MathNode& child : node.children) write_xml(child, out);
    }
    out += "</";
    out += name;
    out += '>';
}

}  // namespace

std::string_view tag_name(Tag tag) {
    for (const auto& info : kTags) {
        if (info.tag == tag) return info.name;
    }
    return "?";
}

std::optional<Tag> tag_from_name(std::string_view name) {
    for (const auto& info : kTags) {
        if (info.name == name) return info.tag;
    }
    return std::nullopt;
}

bool is_token_tag(Tag tag) {
    return tag == Tag::mi || tag == Tag::mo || tag == Tag::mn || tag == Tag::mtext ||
           tag == Tag::ms;
}

bool is_empty_tag(Tag tag) {
    return tag == Tag::mspace || tag == Tag::mprescripts || tag == Tag::none;
}

bool is_container_tag(Tag tag) {
    return !is_token_tag(tag) && !is_empty_tag(tag);
}

std::string_view reject_reason_name(RejectReason reason) {
    switch (reason) {
        case RejectReason::footnote_pattern: return "footnote-pattern";
        case RejectReason::svg_content: return "svg-content";
        case RejectReason::unknown_tag: return "unknown-tag";
        case RejectReason::empty_after_clean: return "empty-after-clean";
    }
    return "?";
}

MathTree parse_mathml(std::string_view xml_text) {
    xml::Element doc = xml::parse(xml_text);
    if (doc.name != "math") throw ParseError("expected <math> root, got <" + doc.name + ">", 0);
    if (doc.children.empty()) throw EmptyExpressionError();

    MathTree tree;
    if (const std::string* alt = doc.attribute("alttext")) {
        tree.source_tex = uni::nfc(*alt);
    }
    Cleaner cleaner(tree);
    std::vector<MathNode> roots;
    for (const auto& child : doc.children) cleaner.clean_into(child, roots);

    if (roots.size() == 1) {
        tree.root = std::move(roots.front());
    } else {
        // Zero survivors leave a childless mrow as carrier for the verdict.
        tree.root.tag = Tag::mrow;
        tree.root.children = std::move(roots);
    }
    return tree;
}

FilterVerdict filter_formula(const MathTree& tree) {
    if (tree.source_tex) {
        if (matches_footnote_tex(*tree.source_tex)) {
            return FilterVerdict::rejected(RejectReason::footnote_pattern);
        }
    } else if (is_empty_base_superscript(tree.root)) {
        return FilterVerdict::rejected(RejectReason::footnote_pattern);
    }
    if (std::any_of(tree.foreign_tags.begin(), tree.foreign_tags.end(), is_svg_name)) {
        return FilterVerdict::rejected(RejectReason::svg_content);
    }
    if (!tree.foreign_tags.empty()) {
        return FilterVerdict::rejected(RejectReason::unknown_tag);
    }
    if (is_container_tag(tree.root.tag) && tree.root.children.empty()) {
        return FilterVerdict::rejected(RejectReason::empty_after_clean);
    }
    return FilterVerdict::kept();
}

MathTree normalize_invisible_operators(MathTree tree) {
    struct Walker {
        static void walk(MathNode& node) {
            if (node.tag == Tag::mo) {
                std::u32string cps = uni::decode_utf8(node.content);
                if (cps.size() == 1 && cps[0] == kInvisibleTimes) {
                    node.op = OperatorKind::invisible_times;
                } else if (cps.size() == 1 && cps[0] == kFunctionApplication) {
                    node.op = OperatorKind::function_application;
                }
            }
            for (MathNode& child : node.children) walk(child);
        }
    };
    Walker::walk(tree.root);
    return tree;
}

std::string to_xml(const MathTree& tree) {
    std::string out = "<math";
    if (tree.source_tex) {
        out += " alttext=\"";
        out += xml::escape_attribute(*tree.source_tex);
        out += '"';
    }
    out += '>';
    write_xml(tree.root, out);
    out += "</math>";
    return out;
}

size_t node_count(const MathNode& node) {
    size_t n = 1;
    for (const MathNode& child : node.children) n += node_count(child);
    return n;
}

}  // namespace moi
