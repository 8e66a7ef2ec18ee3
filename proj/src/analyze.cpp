#include "moi/analyze.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "moi/unicode.hpp"

namespace moi::text {

namespace {

// Fixed English stop-word list (~120 entries), sorted.
constexpr std::array<std::string_view, 127> kStopWords = {
    "a",       "about",   "above",    "after",   "again",      "against", "all",
    "am",      "an",      "and",      "any",     "are",        "as",      "at",
    "be",      "because", "been",     "before",  "being",      "below",   "between",
    "both",    "but",     "by",       "can",     "cannot",     "could",   "did",
    "do",      "does",    "doing",    "down",    "during",     "each",    "few",
    "for",     "from",    "further",  "had",     "has",        "have",    "having",
    "he",      "her",     "here",     "hers",    "herself",    "him",     "himself",
    "his",     "how",     "i",        "if",      "in",         "into",    "is",
    "it",      "its",     "itself",   "just",    "me",         "more",    "most",
    "my",      "myself",  "no",       "nor",     "not",        "now",     "of",
    "off",     "on",      "once",     "only",    "or",         "other",   "our",
    "ours",    "ourselves", "out",    "over",    "own",        "same",    "she",
    "should",  "so",      "some",     "such",    "than",       "that",    "the",
    "their",   "theirs",  "them",     "themselves", "then",    "there",   "these",
    "they",    "this",    "those",    "through", "to",         "too",     "under",
    "until",   "up",      "very",     "was",     "we",         "were",    "what",
    "when",    "where",   "which",    "while",   "who",        "whom",    "why",
    "will",    "with",    "would",    "you",     "your",       "yours",   "yourself",
    "yourselves",
};

bool is_vowel(std::string_view w, size_t i) {
    char c = w[i];
    if (c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u') return true;
    if (c == 'y') return i > 0 && !is_vowel(w, i - 1);
    return false;
}

// m in [C](VC)^m[V]
int measure(std::string_view w) {
    int m = 0;
    size_t i = 0;
    while (i < w.size() && !is_vowel(w, i)) ++i;
    while (i < w.size()) {
        while (i < w.size() && is_vowel(w, i)) ++i;
        if (i >= w.size()) break;
        ++m;
        while (i < w.size() && !is_vowel(w, i)) ++i;
    }
    return m;
}

bool has_vowel(std::string_view w) {
    for (size_t i = 0; i < w.size(); ++i) {
        if (is_vowel(w, i)) return true;
    }
    return false;
}

bool ends_double_consonant(std::string_view w) {
    size_t n = w.size();
    return n >= 2 && w[n - 1] == w[n - 2] && !is_vowel(w, n - 1);
}

// consonant-vowel-consonant ending where the final consonant is not w, x, y
bool ends_cvc(std::string_view w) {
    size_t n = w.size();
    if (n < 3) return false;
    if (is_vowel(w, n - 3) || !is_vowel(w, n - 2) || is_vowel(w, n - 1)) return false;
    char c = w[n - 1];
    return c != 'w' && c != 'x' && c != 'y';
}

bool ends_with(std::string_view w, std::string_view suffix) {
    return w.size() >= suffix.size() && w.substr(w.size() - suffix.size()) == suffix;
}

struct Rule {
    std::string_view suffix;
    std::string_view replacement;
    int min_measure;  // condition on the stem
};

// Longest matching suffix claims the step; its condition then decides.
bool apply_rules(std::string& w, std::initializer_list<Rule> rules) {
    const Rule* best = nullptr;
    for (const Rule& r : rules) {
        if (ends_with(w, r.suffix) && (!best || r.suffix.size() > best->suffix.size())) {
            best = &r;
        }
    }
    if (!best) return false;
    std::string_view stem_part(w.data(), w.size() - best->suffix.size());
    if (measure(stem_part) > best->min_measure - 1) {
        w.resize(stem_part.size());
        w += best->replacement;
        return true;
    }
    return false;
}

std::string porter(std::string_view word) {
    std::string w(word);
    if (w.size() <= 2) return w;

    // step 1a
    if (ends_with(w, "sses")) {
        w.resize(w.size() - 2);
    } else if (ends_with(w, "ies")) {
        w.resize(w.size() - 2);
    } else if (!ends_with(w, "ss") && ends_with(w, "s")) {
        w.pop_back();
    }

    // step 1b
    bool cleanup = false;
    if (ends_with(w, "eed")) {
        if (measure(std::string_view(w).substr(0, w.size() - 3)) > 0) w.pop_back();
    } else if (ends_with(w, "ed") && has_vowel(std::string_view(w).substr(0, w.size() - 2))) {
        w.resize(w.size() - 2);
        cleanup = true;
    } else if (ends_with(w, "ing") && has_vowel(std::string_view(w).substr(0, w.size() - 3))) {
        w.resize(w.size() - 3);
        cleanup = true;
    }
    if (cleanup) {
        if (ends_with(w, "at") || ends_with(w, "bl") || ends_with(w, "iz")) {
            w += 'e';
        } else if (ends_double_consonant(w) && !ends_with(w, "l") && !ends_with(w, "s") &&
                   !ends_with(w, "z")) {
            w.pop_back();
        } else if (measure(w) == 1 && ends_cvc(w)) {
            w += 'e';
        }
    }

    // step 1c
    if (ends_with(w, "y") && has_vowel(std::string_view(w).substr(0, w.size() - 1))) {
        w.back() = 'i';
    }

    // step 2
    apply_rules(w, {{"ational", "ate", 1}, {"tional", "tion", 1}, {"enci", "ence", 1},
                    {"anci", "ance", 1},   {"izer", "ize", 1},    {"abli", "able", 1},
                    {"alli", "al", 1},     {"entli", "ent", 1},   {"eli", "e", 1},
                    {"ousli", "ous", 1},   {"ization", "ize", 1}, {"ation", "ate", 1},
                    {"ator", "ate", 1},    {"alism", "al", 1},    {"iveness", "ive", 1},
                    {"fulness", "ful", 1}, {"ousness", "ous", 1}, {"aliti", "al", 1},
                    {"iviti", "ive", 1},   {"biliti", "ble", 1}});

    // step 3
    apply_rules(w, {{"icate", "ic", 1}, {"ative", "", 1}, {"alize", "al", 1},
                    {"iciti", "ic", 1}, {"ical", "ic", 1}, {"ful", "", 1},
                    {"ness", "", 1}});

    // step 4 ("ion" additionally needs s or t before it)
    const Rule* best = nullptr;
    for (const Rule& r : std::initializer_list<Rule>{
             {"al", "", 2},   {"ance", "", 2}, {"ence", "", 2}, {"er", "", 2},
             {"ic", "", 2},   {"able", "", 2}, {"ible", "", 2}, {"ant", "", 2},
             {"ement", "", 2}, {"ment", "", 2}, {"ent", "", 2},  {"ion", "", 2},
             {"ou", "", 2},   {"ism", "", 2},  {"ate", "", 2},  {"iti", "", 2},
             {"ous", "", 2},  {"ive", "", 2},  {"ize", "", 2}}) {
        if (ends_with(w, r.suffix) && (!best || r.suffix.size() > best->suffix.size())) {
            best = &r;
        }
    }
    if (best) {
        std::string_view stem_part(w.data(), w.size() - best->suffix.size());
        bool ok = measure(stem_part) > 1;
        if (ok && best->suffix == "ion") {
            ok = !stem_part.empty() && (stem_part.back() == 's' || stem_part.back() == 't');
        }
        if (ok) w.resize(stem_part.size());
    }

    // step 5a
    if (ends_with(w, "e")) {
        std::string_view stem_part(w.data(), w.size() - 1);
        int m = measure(stem_part);
        if (m > 1 || (m == 1 && !ends_cvc(stem_part))) w.pop_back();
    }

    // step 5b
    if (measure(w) > 1 && ends_double_consonant(w) && ends_with(w, "l")) w.pop_back();

    return w;
}

}  // namespace

bool is_stop_word(std::string_view word) {
    return std::binary_search(kStopWords.begin(), kStopWords.end(), word);
}

std::string stem(std::string_view word) {
    return porter(word);
}

std::vector<std::string> analyze(std::string_view input) {
    std::string folded = uni::ascii_fold(input);
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&] {
        if (current.empty()) return;
        if (!is_stop_word(current)) {
            std::string stemmed = porter(current);
            if (!is_stop_word(stemmed)) tokens.push_back(std::move(stemmed));
        }
        current.clear();
    };
    for (char c : folded) {
        unsigned char u = static_cast<unsigned char>(c);
        if (std::isalnum(u)) {
            current += static_cast<char>(std::tolower(u));
        } else {
            flush();
        }
    }
    flush();
    return tokens;
}

TextQuery make_query(std::string_view raw) {
    return {std::string(raw), analyze(raw)};
}

}  // namespace moi::text
