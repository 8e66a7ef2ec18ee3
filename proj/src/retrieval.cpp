#include "moi/retrieval.hpp"

#include <algorithm>
#include <stdexcept>

#include "moi/errors.hpp"
#include "moi/serialize.hpp"
#include "moi/unicode.hpp"

namespace moi {

namespace {

bool is_pattern_letter(char32_t cp) {
    if ((cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z')) return true;
    return (cp >= 0x0370 && cp <= 0x03FF) || (cp >= 0x1F00 && cp <= 0x1FFF);  // Greek
}

bool is_pattern_digit(char32_t cp) {
    return cp >= '0' && cp <= '9';
}

bool is_pattern_space(char32_t cp) {
    return cp == ' ' || cp == '\t' || cp == '\r' || cp == '\n';
}

MathNode leaf(Tag tag, std::string content) {
    MathNode node;
    node.tag = tag;
    node.content = std::move(content);
    return node;
}

// Containers whose first child is rendered first; the frontier descent may
// pass through these. msqrt and mroot put a radical in front.
bool frontier_container(Tag tag) {
    return is_container_tag(tag) && tag != Tag::msqrt && tag != Tag::mroot;
}

const std::vector<std::string>& frontier_openers() {
    static const std::vector<std::string> openers = [] {
        std::vector<std::string> v;
        for (int t = 0; t < 27; ++t) {
            Tag tag = static_cast<Tag>(t);
            if (frontier_container(tag)) v.push_back(std::string(tag_name(tag)) + "(");
        }
        std::sort(v.begin(), v.end(),
                  [](const auto& a, const auto& b) { return a.size() > b.size(); });
        return v;
    }();
    return openers;
}

// True when `rest` starts (after any chain of frontier-container openers)
// with the open leaf followed by a delimiter or end of key.
bool frontier_matches(std::string_view rest, std::string_view open_key) {
    size_t pos = 0;
    for (;;) {
        bool descended = false;
        for (const std::string& opener : frontier_openers()) {
            if (rest.substr(pos, opener.size()) == opener) {
                pos += opener.size();
                descended = true;
                break;
            }
        }
        if (!descended) break;
    }
    if (rest.substr(pos, open_key.size()) != open_key) return false;
    size_t end = pos + open_key.size();
    return end == rest.size() || rest[end] == ',' || rest[end] == ')';
}

void collect_identifiers(const MathNode& node, std::set<std::string>& out) {
    if (node.tag == Tag::mi) out.insert(node.content);
    for (const MathNode& child : node.children) collect_identifiers(child, out);
}

// The string every matching key must start with: the closed leaves as the
// leading children of an mrow, comma included.
std::string closed_prefix(const PatternQuery& pattern) {
    std::string prefix = "mrow(";
    for (const MathNode& node : pattern.closed) {
        prefix += serialize(node);
        prefix += ',';
    }
    return prefix;
}

template <typename Fn>
void scan_candidates(const CorpusIndex& corpus, const PatternQuery& pattern, Fn&& accept) {
    if (pattern.closed.empty()) {
        // A bare open leaf can sit at the frontier of any expression shape;
        // this degenerates to a dictionary scan.
        std::string open_key = serialize(*pattern.open);
        for (const auto& [key, rec] : corpus.records) {
            if (frontier_matches(key, open_key)) accept(rec);
        }
        return;
    }
    std::string prefix = closed_prefix(pattern);
    std::optional<std::string> open_key;
    if (pattern.open) open_key = serialize(*pattern.open);
    for (auto it = corpus.records.lower_bound(prefix); it != corpus.records.end(); ++it) {
        std::string_view key = it->first;
        if (key.substr(0, prefix.size()) != prefix) break;
        if (!open_key || frontier_matches(key.substr(prefix.size()), *open_key)) {
            accept(it->second);
        }
    }
}

std::vector<Suggestion> finalize_suggestions(std::vector<Suggestion> matches, size_t limit) {
    std::sort(matches.begin(), matches.end(), suggestion_before);
    if (matches.size() > limit) matches.resize(limit);
    return matches;
}

struct CandidateStats {
    uint64_t hit_count = 0;
};

// Hit counts for every key appearing in the retrieved documents.
std::map<MoiKey, CandidateStats> collect_candidates(const CorpusIndex& corpus,
                                                    const std::vector<std::string>& doc_ids) {
    std::map<MoiKey, CandidateStats> candidates;
    for (const std::string& id : doc_ids) {
        const DocumentIndex& doc = corpus.documents.at(id);
        for (const auto& [key, tf] : doc.tf) ++candidates[key].hit_count;
    }
    return candidates;
}

std::vector<std::string> retrieve_documents(std::string_view query,
                                            const RetrievalSettings& settings,
                                            const text::TextIndex& text) {
    settings.validate();
    return text.search(query, settings.retrieved_docs);
}

}  // namespace

RetrievalSettings RetrievalSettings::unrestricted() {
    RetrievalSettings s;
    s.min_hit_freq = 1;
    s.min_df = 1;
    s.max_df = std::numeric_limits<uint64_t>::max();
    s.min_complexity = 1;
    return s;
}

void RetrievalSettings::validate() const {
    if (retrieved_docs < 1) throw std::invalid_argument("retrieved_docs must be >= 1");
    if (min_hit_freq < 1) throw std::invalid_argument("min_hit_freq must be >= 1");
    if (min_df > max_df) throw std::invalid_argument("min_df must not exceed max_df");
}

bool suggestion_before(const Suggestion& a, const Suggestion& b) {
    if (a.df != b.df) return a.df > b.df;
    if (a.tf != b.tf) return a.tf > b.tf;
    return a.key < b.key;
}

PatternQuery parse_pattern(std::string_view input) {
    std::u32string cps = uni::decode_utf8(uni::nfc(input));
    std::vector<MathNode> items;
    size_t i = 0;
    while (i < cps.size()) {
        char32_t cp = cps[i];
        if (is_pattern_space(cp)) {
            ++i;
        } else if (is_pattern_letter(cp)) {
            std::string run;
            while (i < cps.size() && is_pattern_letter(cps[i])) uni::append_utf8(run, cps[i++]);
            items.push_back(leaf(Tag::mi, std::move(run)));
        } else if (is_pattern_digit(cp)) {
            std::string run;
            while (i < cps.size() && (is_pattern_digit(cps[i]) || cps[i] == '.')) {
                uni::append_utf8(run, cps[i++]);
            }
            items.push_back(leaf(Tag::mn, std::move(run)));
        } else {
            std::string op;
            uni::append_utf8(op, cp);
            items.push_back(leaf(Tag::mo, std::move(op)));
            ++i;
        }
    }
    if (items.empty()) throw PatternError("empty pattern");

    PatternQuery pattern;
    if (items.back().tag != Tag::mo) {
        pattern.open = std::move(items.back());
        items.pop_back();
    }
    pattern.closed = std::move(items);
    if (pattern.closed.empty() && !pattern.open) throw PatternError("pattern has no content");
    return pattern;
}

std::vector<ScoredMoi> retrieve_mois(std::string_view query, const RetrievalSettings& settings,
                                     const CorpusIndex& corpus, const text::TextIndex& text,
                                     const RankingParams& params) {
    std::vector<std::string> docs = retrieve_documents(query, settings, text);
    std::vector<ScoredMoi> results;
    for (const auto& [key, cand] : collect_candidates(corpus, docs)) {
        if (cand.hit_count < settings.min_hit_freq) continue;
        const MoiRecord& rec = corpus.records.at(key);
        if (rec.df < settings.min_df || rec.df > settings.max_df) continue;
        if (rec.complexity < settings.min_complexity) continue;
        results.push_back(mbm25(key, docs, corpus, params));
    }
    sort_scored(results);
    return results;
}

RetrievalResult run_query(std::string_view query, const RetrievalSettings& settings,
                          const CorpusIndex& corpus, const text::TextIndex& text,
                          const RankingParams& params) {
    RetrievalResult result;
    result.documents = retrieve_documents(query, settings, text);
    std::vector<RankedMoi> ranked;
    for (const auto& [key, cand] : collect_candidates(corpus, result.documents)) {
        if (cand.hit_count < settings.min_hit_freq) continue;
        const MoiRecord& rec = corpus.records.at(key);
        if (rec.df < settings.min_df || rec.df > settings.max_df) continue;
        if (rec.complexity < settings.min_complexity) continue;
        RankedMoi row;
        row.scored = mbm25(key, result.documents, corpus, params);
        bool first = true;
        for (const std::string& id : result.documents) {
            const DocumentIndex& doc = corpus.documents.at(id);
            if (!doc.tf.contains(key)) continue;
            double v = tfidf_normalized(key, doc, corpus, params.log_base);
            if (first || v > row.tfidf) row.tfidf = v;
            first = false;
        }
        ranked.push_back(std::move(row));
    }
    std::sort(ranked.begin(), ranked.end(), [](const RankedMoi& a, const RankedMoi& b) {
        return scored_before(a.scored, b.scored);
    });
    result.mois = std::move(ranked);
    return result;
}

FacetCounts facet_counts(std::string_view query, const RetrievalSettings& settings,
                         const CorpusIndex& corpus, const text::TextIndex& text, size_t top_n) {
    std::vector<std::string> docs = retrieve_documents(query, settings, text);
    std::map<MoiKey, uint64_t> counts;
    for (const std::string& id : docs) {
        for (const auto& [key, tf] : corpus.documents.at(id).tf) counts[key] += tf;
    }
    std::map<uint32_t, std::vector<FacetEntry>> by_complexity;
    for (const auto& [key, count] : counts) {
        by_complexity[corpus.records.at(key).complexity].push_back({key, count});
    }
    for (auto& [c, entries] : by_complexity) {
        std::sort(entries.begin(), entries.end(), [](const FacetEntry& a, const FacetEntry& b) {
            if (a.count != b.count) return a.count > b.count;
            return a.key < b.key;
        });
        if (entries.size() > top_n) entries.resize(top_n);
    }
    return by_complexity;
}

std::vector<Suggestion> autocomplete(const PatternQuery& pattern, size_t limit,
                                     const CorpusIndex& corpus) {
    if (!pattern.open && pattern.closed.empty()) throw PatternError("pattern has no content");
    std::vector<Suggestion> matches;
    scan_candidates(corpus, pattern, [&](const MoiRecord& rec) {
        matches.push_back({rec.key, display_from_key(rec.key), rec.total_tf, rec.df});
    });
    return finalize_suggestions(std::move(matches), limit);
}

std::vector<Suggestion> autocomplete(std::string_view pattern, size_t limit,
                                     const CorpusIndex& corpus) {
    return autocomplete(parse_pattern(pattern), limit, corpus);
}

std::vector<Suggestion> suggest_containing(const PatternQuery& pattern,
                                           const std::set<std::string>& required_symbols,
                                           size_t limit, const CorpusIndex& corpus) {
    if (required_symbols.empty()) throw PatternError("required symbol set is empty");
    if (!pattern.open && pattern.closed.empty()) throw PatternError("pattern has no content");
    size_t n_closed = pattern.closed.size();
    std::vector<Suggestion> matches;
    scan_candidates(corpus, pattern, [&](const MoiRecord& rec) {
        MathNode tree = deserialize(rec.key);
        std::set<std::string> symbols;
        if (pattern.closed.empty()) {
            collect_identifiers(tree, symbols);
        } else {
            for (size_t i = n_closed; i < tree.children.size(); ++i) {
                collect_identifiers(tree.children[i], symbols);
            }
        }
        if (std::includes(symbols.begin(), symbols.end(), required_symbols.begin(),
                          required_symbols.end())) {
            matches.push_back({rec.key, display_from_key(rec.key), rec.total_tf, rec.df});
        }
    });
    return finalize_suggestions(std::move(matches), limit);
}

std::vector<Suggestion> suggest_containing(std::string_view lhs_pattern,
                                           const std::set<std::string>& required_symbols,
                                           size_t limit, const CorpusIndex& corpus) {
    return suggest_containing(parse_pattern(lhs_pattern), required_symbols, limit, corpus);
}

}  // namespace moi
