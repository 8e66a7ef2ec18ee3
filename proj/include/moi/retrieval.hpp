#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "moi/index.hpp"
#include "moi/ranking.hpp"
#include "moi/text_index.hpp"

namespace moi {

// Bounds applied to candidate expressions from a retrieved document subset.
// min_hit_freq counts the retrieved documents an expression appears in;
// min_df/max_df bound the corpus-wide document frequency.
struct RetrievalSettings {
    uint64_t retrieved_docs = 200;
    uint64_t min_hit_freq = 7;
    uint64_t min_df = 10;
    uint64_t max_df = 10000;
    uint32_t min_complexity = 1;

    static RetrievalSettings unrestricted();

    void validate() const;  // throws std::invalid_argument
};

struct Suggestion {
    MoiKey key;
    std::string display;
    uint64_t tf = 0;
    uint64_t df = 0;

    bool operator==(const Suggestion&) const = default;
};

// df desc, tf desc, key bytes asc.
bool suggestion_before(const Suggestion& a, const Suggestion& b);

// A parsed autocomplete pattern: a flat run of leaves that become the leading
// children of an mrow, plus an optional trailing leaf that is still "open"
// (the hole at the rightmost frontier). Input syntax: letters form <mi>
// (a run of Latin or Greek letters is one identifier), digit runs form <mn>,
// any other non-space character forms a one-character <mo>. A trailing
// operator leaves the whole right-hand side open.
struct PatternQuery {
    std::vector<MathNode> closed;
    std::optional<MathNode> open;
};

PatternQuery parse_pattern(std::string_view input);  // throws PatternError

// Documents for a text query, then every key of those documents that clears
// the settings, scored with mbm25 over the retrieved subset and ordered by
// the ranking tie-break chain. An empty document subset yields an empty list.
std::vector<ScoredMoi> retrieve_mois(std::string_view query, const RetrievalSettings& settings,
                                     const CorpusIndex& corpus, const text::TextIndex& text,
                                     const RankingParams& params = {});

// Full query result for the CLI and service: the retrieved subset, ranked
// expressions with the normalized-TF baseline column, and optional facets.
struct RankedMoi {
    ScoredMoi scored;
    double tfidf = 0.0;  // max normalized-TF score over the retrieved subset
};

struct FacetEntry {
    MoiKey key;
    uint64_t count = 0;  // occurrences within the retrieved subset

    bool operator==(const FacetEntry&) const = default;
};

using FacetCounts = std::map<uint32_t, std::vector<FacetEntry>>;

struct RetrievalResult {
    std::vector<std::string> documents;  // D_q, ranked
    std::vector<RankedMoi> mois;
};

RetrievalResult run_query(std::string_view query, const RetrievalSettings& settings,
                          const CorpusIndex& corpus, const text::TextIndex& text,
                          const RankingParams& params = {});

// Most frequent keys per complexity class within the retrieved subset,
// count desc then key asc, truncated to top_n per class.
FacetCounts facet_counts(std::string_view query, const RetrievalSettings& settings,
                         const CorpusIndex& corpus, const text::TextIndex& text,
                         size_t top_n = 5);

// Keys extending the pattern: the closed leaves must be the leading children
// of the expression, and the open leaf (when present) must sit at the
// leftmost visual frontier of what follows — reached through first children
// of containers that render content-first (msqrt/mroot draw a radical before
// their content and block the descent).
std::vector<Suggestion> autocomplete(std::string_view pattern, size_t limit,
                                     const CorpusIndex& corpus);
std::vector<Suggestion> autocomplete(const PatternQuery& pattern, size_t limit,
                                     const CorpusIndex& corpus);

// Keys matching the pattern whose remaining right-hand side contains every
// required identifier as an <mi> leaf, in any order.
std::vector<Suggestion> suggest_containing(std::string_view lhs_pattern,
                                           const std::set<std::string>& required_symbols,
                                           size_t limit, const CorpusIndex& corpus);
std::vector<Suggestion> suggest_containing(const PatternQuery& pattern,
                                           const std::set<std::string>& required_symbols,
                                           size_t limit, const CorpusIndex& corpus);

}  // namespace moi
