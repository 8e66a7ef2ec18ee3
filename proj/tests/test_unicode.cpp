#include "moi/unicode.hpp"

#include <doctest.h>

#include <random>

using namespace moi;

namespace {

struct NormCase {
    const char* input;
    const char* nfc;
    const char* nfd;
};

// Frozen against a reference Unicode implementation.
const NormCase kNormCases[] = {
    {"café", "café", "café"},
    {"café", "café", "café"},
    {"Å", "Å", "Å"},
    {"Ω", "Ω", "Ω"},
    {"Ω", "Ω", "Ω"},
    {"q̣̇", "q̣̇", "q̣̇"},
    {"q̣̇", "q̣̇", "q̣̇"},
    {"ḍ̇", "ḍ̇", "ḍ̇"},
    {"ṩ", "ṩ", "ṩ"},
    {"가", "가", "가"},
    {"가", "가", "가"},
    {"각", "각", "각"},
    {"ά", "ά", "ά"},
    {"µ", "µ", "µ"},
    {"x̖̅", "x̖̅", "x̖̅"},
    {"Ὰ", "Ὰ", "Ὰ"},
    {"abc123", "abc123", "abc123"},
    {"ÅÅÅ", "ÅÅÅ", "ÅÅÅ"},
};

}  // namespace

TEST_CASE("utf8 round trip") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        std::u32string cps;
        for (int k = 0; k < 20; ++k) {
            char32_t cp;
            do {
                cp = static_cast<char32_t>(rng() % 0x110000);
            } while (cp >= 0xD800 && cp <= 0xDFFF);
            cps.push_back(cp);
        }
        CHECK(uni::decode_utf8(uni::encode_utf8(cps)) == cps);
    }
}

TEST_CASE("invalid utf8 replaced") {
    std::u32string out = uni::decode_utf8("a\xC0\x80z");  // overlong NUL
    REQUIRE(out.size() == 4);
    CHECK(out[0] == U'a');
    CHECK(out[1] == 0xFFFD);
    CHECK(out[3] == U'z');
    CHECK(uni::decode_utf8("\xED\xA0\x80").front() == 0xFFFD);  // surrogate
}

TEST_CASE("nfc/nfd reference cases") {
    for (const NormCase& c : kNormCases) {
        CAPTURE(c.input);
        CHECK(uni::nfc(c.input) == c.nfc);
        CHECK(uni::nfd(c.input) == c.nfd);
    }
}

TEST_CASE("nfc idempotent on normalized output") {
    for (const NormCase& c : kNormCases) {
        CHECK(uni::nfc(c.nfc) == c.nfc);
        CHECK(uni::nfd(c.nfd) == c.nfd);
    }
}

TEST_CASE("ascii folding") {
    CHECK(uni::ascii_fold("Schrödinger") == "Schrodinger");
    CHECK(uni::ascii_fold("naïve") == "naive");
    CHECK(uni::ascii_fold("ßtraße") == "sstrasse");
    CHECK(uni::ascii_fold("Łødź") == "Lodz");
    CHECK(uni::ascii_fold("ζ(s)") == "(s)");  // greek has no counterpart
    CHECK(uni::ascii_fold("plain ascii") == "plain ascii");
    CHECK(uni::ascii_fold("Œuvre") == "OEuvre");
}
