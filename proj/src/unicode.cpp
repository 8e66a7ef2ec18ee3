#include "moi/unicode.hpp"

#include <algorithm>

namespace moi::uni {

#include "unicode_tables.inc"

namespace {

constexpr char32_t kReplacement = 0xFFFD;

// Hangul composition constants (UAX #15).
constexpr char32_t kSBase = 0xAC00;
constexpr char32_t kLBase = 0x1100;
constexpr char32_t kVBase = 0x1161;
constexpr char32_t kTBase = 0x11A7;
constexpr int kLCount = 19;
constexpr int kVCount = 21;
constexpr int kTCount = 28;
constexpr int kNCount = kVCount * kTCount;
constexpr int kSCount = kLCount * kNCount;

uint8_t ccc_of(char32_t cp) {
    auto it = std::lower_bound(std::begin(kCcc), std::end(kCcc), cp,
                               [](const CccEntry& e, char32_t c) { return e.cp < c; });
    return (it != std::end(kCcc) && it->cp == cp) ? it->ccc : 0;
}

void decompose_into(char32_t cp, std::u32string& out) {
    if (cp >= kSBase && cp < kSBase + kSCount) {
        char32_t s = cp - kSBase;
        out.push_back(kLBase + s / kNCount);
        out.push_back(kVBase + (s % kNCount) / kTCount);
        if (s % kTCount != 0) out.push_back(kTBase + s % kTCount);
        return;
    }
    auto it = std::lower_bound(std::begin(kDecomp), std::end(kDecomp), cp,
                               [](const DecompEntry& e, char32_t c) { return e.cp < c; });
    if (it != std::end(kDecomp) && it->cp == cp) {
        for (uint8_t i = 0; i < it->len; ++i) out.push_back(kDecompPool[it->offset + i]);
    } else {
        out.push_back(cp);
    }
}

// Stable sort of combining marks by combining class (canonical ordering).
void canonical_reorder(std::u32string& cps) {
    size_t i = 0;
    while (i < cps.size()) {
        if (ccc_of(cps[i]) == 0) {
            ++i;
            continue;
        }
        size_t j = i;
        while (j < cps.size() && ccc_of(cps[j]) != 0) ++j;
        std::stable_sort(cps.begin() + i, cps.begin() + j,
                         [](char32_t a, char32_t b) { return ccc_of(a) < ccc_of(b); });
        i = j;
    }
}

char32_t compose_pair(char32_t a, char32_t b) {
    if (a >= kLBase && a < kLBase + kLCount && b >= kVBase && b < kVBase + kVCount) {
        return kSBase + ((a - kLBase) * kVCount + (b - kVBase)) * kTCount;
    }
    if (a >= kSBase && a < kSBase + kSCount && (a - kSBase) % kTCount == 0 &&
        b > kTBase && b < kTBase + kTCount) {
        return a + (b - kTBase);
    }
    auto it = std::lower_bound(std::begin(kComp), std::end(kComp), std::pair{a, b},
                               [](const CompEntry& e, const std::pair<char32_t, char32_t>& p) {
                                   return e.first != p.first ? e.first < p.first
                                                             : e.second < p.second;
                               });
    if (it != std::end(kComp) && it->first == a && it->second == b) return it->composed;
    return 0;
}

// Canonical composition over a decomposed, reordered sequence (UAX #15 D117).
void canonical_compose(std::u32string& cps) {
    if (cps.empty()) return;
    std::u32string out;
    out.reserve(cps.size());
    size_t last_starter = std::u32string::npos;
    uint8_t prev_ccc = 0;
    for (char32_t cp : cps) {
        uint8_t ccc = ccc_of(cp);
        if (last_starter != std::u32string::npos) {
            bool blocked = prev_ccc != 0 && prev_ccc >= ccc;
            if (!blocked) {
                if (char32_t comp = compose_pair(out[last_starter], cp)) {
                    out[last_starter] = comp;
                    continue;
                }
            }
        }
        if (ccc == 0) {
            last_starter = out.size();
            prev_ccc = 0;
        } else {
            prev_ccc = ccc;
        }
        out.push_back(cp);
    }
    cps.swap(out);
}

std::u32string decompose_all(std::string_view s) {
    std::u32string cps = decode_utf8(s);
    std::u32string out;
    out.reserve(cps.size());
    for (char32_t cp : cps) decompose_into(cp, out);
    canonical_reorder(out);
    return out;
}

struct FoldEntry {
    char32_t cp;
    const char* ascii;
};

// Latin specials without a canonical decomposition.
const FoldEntry kFold[] = {
    {0x00C6, "AE"}, {0x00D0, "D"},  {0x00D8, "O"},  {0x00DE, "TH"}, {0x00DF, "ss"},
    {0x00E6, "ae"}, {0x00F0, "d"},  {0x00F8, "o"},  {0x00FE, "th"}, {0x0110, "D"},
    {0x0111, "d"},  {0x0126, "H"},  {0x0127, "h"},  {0x0131, "i"},  {0x0138, "k"},
    {0x0141, "L"},  {0x0142, "l"},  {0x014A, "NG"}, {0x014B, "ng"}, {0x0152, "OE"},
    {0x0153, "oe"}, {0x0166, "T"},  {0x0167, "t"},  {0x017F, "s"},  {0x0189, "D"},
    {0x0197, "I"},  {0x019F, "O"},  {0x01B5, "Z"},  {0x01B6, "z"},  {0x0253, "b"},
    {0x0257, "d"},  {0x025B, "e"},  {0x0268, "i"},  {0x0271, "m"},  {0x026B, "l"},
    {0x0289, "u"},  {0x2010, "-"},  {0x2011, "-"},  {0x2012, "-"},  {0x2013, "-"},
    {0x2014, "-"},  {0x2018, "'"},  {0x2019, "'"},  {0x201C, "\""}, {0x201D, "\""},
};

const char* fold_special(char32_t cp) {
    for (const auto& e : kFold) {
        if (e.cp == cp) return e.ascii;
    }
    return nullptr;
}

}  // namespace

std::u32string decode_utf8(std::string_view s) {
    std::u32string out;
    out.reserve(s.size());
    size_t i = 0;
    while (i < s.size()) {
        unsigned char b0 = static_cast<unsigned char>(s[i]);
        if (b0 < 0x80) {
            out.push_back(b0);
            ++i;
            continue;
        }
        int len = 0;
        char32_t cp = 0;
        if ((b0 & 0xE0) == 0xC0) {
            len = 2;
            cp = b0 & 0x1F;
        } else if ((b0 & 0xF0) == 0xE0) {
            len = 3;
            cp = b0 & 0x0F;
        } else if ((b0 & 0xF8) == 0xF0) {
            len = 4;
            cp = b0 & 0x07;
        } else {
            out.push_back(kReplacement);
            ++i;
            continue;
        }
        if (i + len > s.size()) {
            out.push_back(kReplacement);
            ++i;
            continue;
        }
        bool ok = true;
        for (int k = 1; k < len; ++k) {
            unsigned char b = static_cast<unsigned char>(s[i + k]);
            if ((b & 0xC0) != 0x80) {
                ok = false;
                break;
            }
            cp = (cp << 6) | (b & 0x3F);
        }
        // Overlong forms and surrogates are invalid.
        if (!ok || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF) ||
            (len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000)) {
            out.push_back(kReplacement);
            ++i;
            continue;
        }
        out.push_back(cp);
        i += len;
    }
    return out;
}

void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

std::string encode_utf8(std::u32string_view cps) {
    std::string out;
    out.reserve(cps.size());
    for (char32_t cp : cps) append_utf8(out, cp);
    return out;
}

std::string nfd(std::string_view s) {
    return encode_utf8(decompose_all(s));
}

std::string nfc(std::string_view s) {
    std::u32string cps = decompose_all(s);
    canonical_compose(cps);
    return encode_utf8(cps);
}

std::string ascii_fold(std::string_view s) {
    std::u32string cps = decompose_all(s);
    std::string out;
    out.reserve(s.size());
    for (char32_t cp : cps) {
        if (cp < 0x80) {
            out.push_back(static_cast<char>(cp));
        } else if (const char* a = fold_special(cp)) {
            out += a;
        }
        // Everything else (combining marks included) has no counterpart.
    }
    return out;
}

}  // namespace moi::uni
