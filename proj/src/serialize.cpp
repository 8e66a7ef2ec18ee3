#include "moi/serialize.hpp"

#include <algorithm>

#include "moi/errors.hpp"
#include "moi/unicode.hpp"

namespace moi {

namespace {

constexpr std::string_view kIvtToken = "ivt";
constexpr std::string_view kFaToken = "fa";

bool needs_escape(char c) {
    return c == '(' || c == ')' || c == ',' || c == ':' || c == '\\';
}

void append_leaf_payload(const MathNode& node, std::string& out, bool escaped) {
    if (node.tag == Tag::mo) {
        if (node.op == OperatorKind::invisible_times) {
            out += kIvtToken;
            return;
        }
        if (node.op == OperatorKind::function_application) {
            out += kFaToken;
            return;
        }
    }
    if (!escaped) {
        out += node.content;
        return;
    }
    size_t mark = out.size();
    for (char c : node.content) {
        if (needs_escape(c)) out += '\\';
        out += c;
    }
    // A literal "ivt"/"fa" payload on <mo> would collide with the operator
    // tokens; a leading backslash keeps them apart.
    if (node.tag == Tag::mo) {
        std::string_view written(out.data() + mark, out.size() - mark);
        if (written == kIvtToken || written == kFaToken) out.insert(mark, 1, '\\');
    }
}

void write_key(const MathNode& node, std::string& out, bool escaped) {
    out += tag_name(node.tag);
    if (is_container_tag(node.tag)) {
        out += '(';
        for (size_t i = 0; i < node.children.size(); ++i) {
            if (i) out += ',';
            write_key(node.children[i], out, escaped);
        }
        out += ')';
    } else {
        out += ':';
        append_leaf_payload(node, out, escaped);
    }
}

class KeyReader {
public:
    explicit KeyReader(std::string_view key) : key_(key) {}

    MathNode read() {
        MathNode node = read_node();
        if (pos_ != key_.size()) fail("trailing characters");
        return node;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw DecodeError(msg, pos_); }

    MathNode read_node() {
        size_t start = pos_;
        while (pos_ < key_.size() && key_[pos_] != ':' && key_[pos_] != '(') ++pos_;
        if (pos_ >= key_.size()) fail("expected ':' or '(' after tag name");
        std::string_view name = key_.substr(start, pos_ - start);
        auto tag = tag_from_name(name);
        if (!tag) {
            pos_ = start;
            fail("unknown tag '" + std::string(name) + "'");
        }
        MathNode node;
        node.tag = *tag;
        if (key_[pos_] == '(') {
            if (!is_container_tag(*tag)) fail("leaf tag used with '('");
            ++pos_;
            if (pos_ < key_.size() && key_[pos_] == ')') {
                ++pos_;
                return node;
            }
            for (;;) {
                node.children.push_back(read_node());
                if (pos_ >= key_.size()) fail("unbalanced '('");
                char c = key_[pos_++];
                if (c == ')') break;
                if (c != ',') fail("expected ',' or ')'");
            }
            return node;
        }
        if (is_container_tag(*tag)) fail("container tag used with ':'");
        ++pos_;
        read_leaf_payload(node);
        if (is_empty_tag(*tag) && !node.content.empty()) fail("content on empty-leaf tag");
        return node;
    }

    void read_leaf_payload(MathNode& node) {
        size_t start = pos_;
        std::string content;
        while (pos_ < key_.size() && key_[pos_] != ',' && key_[pos_] != ')') {
            if (key_[pos_] == '\\') {
                if (pos_ + 1 >= key_.size()) fail("dangling escape");
                content += key_[pos_ + 1];
                pos_ += 2;
            } else if (key_[pos_] == '(') {
                fail("unescaped '(' in leaf content");
            } else {
                content += key_[pos_++];
            }
        }
        std::string_view raw = key_.substr(start, pos_ - start);
        if (node.tag == Tag::mo && raw == kIvtToken) {
            node.op = OperatorKind::invisible_times;
            uni::append_utf8(node.content, kInvisibleTimes);
        } else if (node.tag == Tag::mo && raw == kFaToken) {
            node.op = OperatorKind::function_application;
            uni::append_utf8(node.content, kFunctionApplication);
        } else {
            node.content = std::move(content);
        }
        // Reject non-canonical escaping so decoding stays a strict inverse.
        std::string reencoded;
        append_leaf_payload(node, reencoded, /*escaped=*/true);
        if (reencoded != raw) {
            pos_ = start;
            fail("non-canonical leaf encoding");
        }
    }

    std::string_view key_;
    size_t pos_ = 0;
};

struct AnnotatedNode {
    std::string key;
    uint32_t depth = 1;
    bool has_mi = false;
    std::vector<AnnotatedNode> children;
};

AnnotatedNode annotate(const MathNode& node) {
    AnnotatedNode info;
    info.has_mi = node.tag == Tag::mi;
    if (is_container_tag(node.tag)) {
        info.key += tag_name(node.tag);
        info.key += '(';
        uint32_t max_child = 0;
        info.children.reserve(node.children.size());
        for (size_t i = 0; i < node.children.size(); ++i) {
            AnnotatedNode child = annotate(node.children[i]);
            if (i) info.key += ',';
            info.key += child.key;
            info.has_mi = info.has_mi || child.has_mi;
            max_child = std::max(max_child, child.depth);
            info.children.push_back(std::move(child));
        }
        info.key += ')';
        info.depth = 1 + max_child;
    } else {
        info.key = serialize(node);
    }
    return info;
}

void collect(const AnnotatedNode& info, std::vector<MoiOccurrence>& out) {
    if (info.has_mi) out.push_back({info.key, info.depth});
    for (const AnnotatedNode& child : info.children) collect(child, out);
}

}  // namespace

std::string serialize(const MathNode& node) {
    std::string out;
    write_key(node, out, /*escaped=*/true);
    return out;
}

std::string serialize(const MathTree& tree) {
    return serialize(tree.root);
}

std::string display_key(const MathNode& node) {
    std::string out;
    write_key(node, out, /*escaped=*/false);
    return out;
}

std::string display_key(const MathTree& tree) {
    return display_key(tree.root);
}

std::string display_from_key(const MoiKey& key) {
    return display_key(deserialize(key));
}

MathNode deserialize(std::string_view key) {
    return KeyReader(key).read();
}

uint32_t complexity(const MathNode& node) {
    uint32_t max_child = 0;
    for (const MathNode& child : node.children) {
        max_child = std::max(max_child, complexity(child));
    }
    return 1 + max_child;
}

uint32_t complexity(const MathTree& tree) {
    return complexity(tree.root);
}

bool contains_identifier(const MathNode& node) {
    if (node.tag == Tag::mi) return true;
    return std::any_of(node.children.begin(), node.children.end(), contains_identifier);
}

std::vector<MoiOccurrence> enumerate_mois(const MathNode& root) {
    std::vector<MoiOccurrence> out;
    collect(annotate(root), out);
    return out;
}

std::vector<MoiOccurrence> enumerate_mois(const MathTree& tree) {
    return enumerate_mois(tree.root);
}

}  // namespace moi
