#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "moi/index.hpp"

namespace moi {

enum class LogBase : uint8_t { natural, base2, base10 };

// k scales term-frequency influence, b the document-length normalization.
// b = 0.95 weighs length heavily, countering the length inflation caused by
// counting every subexpression.
struct RankingParams {
    double k = 1.2;
    double b = 0.95;
    LogBase log_base = LogBase::natural;
};

struct ScoredMoi {
    MoiKey key;
    double score = 0.0;
    uint64_t df = 0;
    uint64_t total_tf = 0;
    std::string best_doc;     // argmax document; ties take the smallest id
    uint64_t hit_count = 0;   // documents in the evaluated set containing the key

    bool operator==(const ScoredMoi&) const = default;
};

// log((N - n + 1/2) / (n + 1/2)); the halves keep it total. Negative for
// terms in more than half the corpus.
double idf(uint64_t df, uint64_t n_documents, LogBase base = LogBase::natural);
double idf(const MoiRecord& record, const CorpusStats& stats,
           LogBase base = LogBase::natural);

// Document-scoped analogue: log((|d| - tf + 1/2) / (tf + 1/2)).
// Requires 0 < tf <= doc_length.
double itf(uint64_t tf, uint64_t doc_length, LogBase base = LogBase::natural);

// (k+1) * IDF * TF / (TF + k(1 - b + b|d|/avgDL))
double okapi_bm25(uint64_t tf, uint64_t doc_length, const MoiRecord& record,
                  const CorpusStats& stats, const RankingParams& params);

// The complexity-aware per-document score:
// (k+1) * IDF * ITF * TF / (max TF among the document's terms of equal
// complexity + k(1 - b + b*avgDL/(|d|*avgC))).
// Throws AbsentTermError when the key is not in the document.
double score_std(const MoiKey& key, const DocumentIndex& doc, const CorpusIndex& index,
                 const RankingParams& params);

// Maximum score_std over the document set (ids must exist in the index).
// Throws AbsentTermError when no member contains the key.
ScoredMoi mbm25(const MoiKey& key, std::span<const std::string> doc_ids,
                const CorpusIndex& index, const RankingParams& params);

// Normalized-TF baseline: (TF/|d|) * IDF.
double tfidf_normalized(const MoiKey& key, const DocumentIndex& doc, const CorpusIndex& index,
                        LogBase base = LogBase::natural);

// Deterministic result order: score desc, df desc, key bytes asc.
bool scored_before(const ScoredMoi& a, const ScoredMoi& b);
void sort_scored(std::vector<ScoredMoi>& results);

}  // namespace moi
