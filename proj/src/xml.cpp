#include "moi/xml.hpp"

#include <cctype>

#include "moi/errors.hpp"
#include "moi/unicode.hpp"

namespace moi::xml {

namespace {

bool is_name_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == ':' ||
           static_cast<unsigned char>(c) >= 0x80;
}

bool is_name_char(char c) {
    return is_name_start(c) || std::isdigit(static_cast<unsigned char>(c)) || c == '-' ||
           c == '.';
}

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
}

class Parser {
public:
    explicit Parser(std::string_view in) : in_(in) {}

    Element parse_document() {
        skip_bom();
        skip_misc();
        if (pos_ >= in_.size() || in_[pos_] != '<') fail("expected root element");
        Element root = parse_element();
        skip_misc();
        if (pos_ < in_.size()) fail("content after root element");
        return root;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

    void skip_bom() {
        if (in_.substr(0, 3) == "\xEF\xBB\xBF") pos_ = 3;
    }

    void skip_ws() {
        while (pos_ < in_.size() && is_space(in_[pos_])) ++pos_;
    }

    bool try_consume(std::string_view tok) {
        if (in_.substr(pos_, tok.size()) == tok) {
            pos_ += tok.size();
            return true;
        }
        return false;
    }

    void skip_until(std::string_view terminator) {
        size_t found = in_.find(terminator, pos_);
        if (found == std::string_view::npos) fail("unterminated construct");
        pos_ = found + terminator.size();
    }

    // Whitespace, comments, and processing instructions between markup.
    void skip_misc() {
        for (;;) {
            skip_ws();
            if (try_consume("<?")) {
                skip_until("?>");
            } else if (try_consume("<!--")) {
                skip_until("-->");
            } else {
                return;
            }
        }
    }

    std::string parse_name() {
        size_t start = pos_;
        if (pos_ >= in_.size() || !is_name_start(in_[pos_])) fail("expected name");
        while (pos_ < in_.size() && is_name_char(in_[pos_])) ++pos_;
        std::string_view name = in_.substr(start, pos_ - start);
        // mml:mi -> mi
        size_t colon = name.rfind(':');
        if (colon != std::string_view::npos) name = name.substr(colon + 1);
        return std::string(name);
    }

    void decode_entity(std::string& out) {
        size_t entity_start = pos_;
        ++pos_;  // '&'
        size_t end = in_.find(';', pos_);
        if (end == std::string_view::npos || end - pos_ > 32) {
            pos_ = entity_start;
            fail("unterminated entity reference");
        }
        std::string_view body = in_.substr(pos_, end - pos_);
        pos_ = end + 1;
        if (body == "lt") {
            out += '<';
        } else if (body == "gt") {
            out += '>';
        } else if (body == "amp") {
            out += '&';
        } else if (body == "apos") {
            out += '\'';
        } else if (body == "quot") {
            out += '"';
        } else if (!body.empty() && body[0] == '#') {
            char32_t cp = 0;
            bool ok = body.size() > 1;
            if (body.size() > 2 && (body[1] == 'x' || body[1] == 'X')) {
                for (size_t i = 2; i < body.size(); ++i) {
                    char c = body[i];
                    int d;
                    if (c >= '0' && c <= '9') d = c - '0';
                    else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
                    else if (c >= 'A' && c <= 'F') d = c - 'A' + 10;
                    else { ok = false; break; }
                    cp = cp * 16 + d;
                }
            } else {
                for (size_t i = 1; i < body.size(); ++i) {
                    if (body[i] < '0' || body[i] > '9') { ok = false; break; }
                    cp = cp * 10 + (body[i] - '0');
                }
            }
            if (!ok || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
                pos_ = entity_start;
                fail("invalid character reference");
            }
            uni::append_utf8(out, cp);
        } else {
            pos_ = entity_start;
            fail("unknown entity '&" + std::string(body) + ";'");
        }
    }

    std::string parse_attribute_value() {
        if (pos_ >= in_.size() || (in_[pos_] != '"' && in_[pos_] != '\'')) {
            fail("expected attribute value");
        }
        char quote = in_[pos_++];
        std::string value;
        while (pos_ < in_.size() && in_[pos_] != quote) {
            if (in_[pos_] == '&') {
                decode_entity(value);
            } else if (in_[pos_] == '<') {
                fail("'<' in attribute value");
            } else {
                value += in_[pos_++];
            }
        }
        if (pos_ >= in_.size()) fail("unterminated attribute value");
        ++pos_;
        return value;
    }

    Element parse_element() {
        ++pos_;  // '<'
        Element el;
        el.name = parse_name();
        for (;;) {
            skip_ws();
            if (pos_ >= in_.size()) fail("unterminated start tag");
            if (try_consume("/>")) return el;
            if (in_[pos_] == '>') {
                ++pos_;
                break;
            }
            std::string attr_name = parse_name();
            skip_ws();
            if (pos_ >= in_.size() || in_[pos_] != '=') fail("expected '=' after attribute name");
            ++pos_;
            skip_ws();
            el.attributes.emplace_back(std::move(attr_name), parse_attribute_value());
        }
        parse_content(el);
        return el;
    }

    void parse_content(Element& el) {
        for (;;) {
            if (pos_ >= in_.size()) fail("unterminated element <" + el.name + ">");
            if (in_[pos_] == '<') {
                if (try_consume("</")) {
                    std::string name = parse_name();
                    if (name != el.name) fail("mismatched end tag </" + name + ">");
                    skip_ws();
                    if (pos_ >= in_.size() || in_[pos_] != '>') fail("expected '>'");
                    ++pos_;
                    return;
                }
                if (try_consume("<!--")) {
                    skip_until("-->");
                } else if (try_consume("<![CDATA[")) {
                    size_t end = in_.find("]]>", pos_);
                    if (end == std::string_view::npos) fail("unterminated CDATA");
                    el.text.append(in_.substr(pos_, end - pos_));
                    pos_ = end + 3;
                } else if (try_consume("<?")) {
                    skip_until("?>");
                } else {
                    el.children.push_back(parse_element());
                }
            } else if (in_[pos_] == '&') {
                decode_entity(el.text);
            } else {
                el.text += in_[pos_++];
            }
        }
    }

    std::string_view in_;
    size_t pos_ = 0;
};

}  // namespace

const std::string* Element::attribute(std::string_view name) const {
    for (const auto& [k, v] : attributes) {
        if (k == name) return &v;
    }
    return nullptr;
}

Element parse(std::string_view input) {
    return Parser(input).parse_document();
}

std::string escape_text(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string escape_attribute(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace moi::xml
