#include "moi/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "moi/errors.hpp"

namespace moi {

namespace {

double scaled_log(double x, LogBase base) {
    double v = std::log(x);
    switch (base) {
        case LogBase::natural: return v;
        case LogBase::base2: return v / std::log(2.0);
        case LogBase::base10: return v / std::log(10.0);
    }
    return v;
}

const DocumentIndex& doc_or_throw(const CorpusIndex& index, const std::string& doc_id) {
    auto it = index.documents.find(doc_id);
    if (it == index.documents.end()) {
        throw std::invalid_argument("unknown document id: " + doc_id);
    }
    return it->second;
}

}  // namespace

double idf(uint64_t df, uint64_t n_documents, LogBase base) {
    double n = static_cast<double>(n_documents);
    double nt = static_cast<double>(df);
    return scaled_log((n - nt + 0.5) / (nt + 0.5), base);
}

double idf(const MoiRecord& record, const CorpusStats& stats, LogBase base) {
    return idf(record.df, stats.n_documents, base);
}

double itf(uint64_t tf, uint64_t doc_length, LogBase base) {
    if (tf == 0 || tf > doc_length) {
        throw std::invalid_argument("itf requires 0 < tf <= doc_length");
    }
    double l = static_cast<double>(doc_length);
    double t = static_cast<double>(tf);
    return scaled_log((l - t + 0.5) / (t + 0.5), base);
}

double okapi_bm25(uint64_t tf, uint64_t doc_length, const MoiRecord& record,
                  const CorpusStats& stats, const RankingParams& params) {
    if (stats.avg_doc_length <= 0.0) {
        throw std::invalid_argument("okapi_bm25 requires a positive average document length");
    }
    if (tf == 0) return 0.0;
    double t = static_cast<double>(tf);
    double norm = 1.0 - params.b +
                  params.b * static_cast<double>(doc_length) / stats.avg_doc_length;
    return (params.k + 1.0) * idf(record, stats, params.log_base) * t / (t + params.k * norm);
}

double score_std(const MoiKey& key, const DocumentIndex& doc, const CorpusIndex& index,
                 const RankingParams& params) {
    auto tf_it = doc.tf.find(key);
    if (tf_it == doc.tf.end()) throw AbsentTermError(key);
    uint64_t tf = tf_it->second;

    const MoiRecord& record = index.records.at(key);
    uint64_t max_tf = doc.max_tf_by_complexity.at(record.complexity);

    double norm = 1.0 - params.b +
                  params.b * index.stats.avg_doc_length /
                      (static_cast<double>(doc.length) * index.stats.avg_complexity);
    double numerator = (params.k + 1.0) * idf(record, index.stats, params.log_base) *
                       itf(tf, doc.length, params.log_base) * static_cast<double>(tf);
    return numerator / (static_cast<double>(max_tf) + params.k * norm);
}

ScoredMoi mbm25(const MoiKey& key, std::span<const std::string> doc_ids,
                const CorpusIndex& index, const RankingParams& params) {
    ScoredMoi result;
    result.key = key;
    if (auto rec = index.records.find(key); rec != index.records.end()) {
        result.df = rec->second.df;
        result.total_tf = rec->second.total_tf;
    }
    bool found = false;
    for (const std::string& doc_id : doc_ids) {
        const DocumentIndex& doc = doc_or_throw(index, doc_id);
        if (!doc.tf.contains(key)) continue;
        ++result.hit_count;
        double s = score_std(key, doc, index, params);
        if (!found || s > result.score || (s == result.score && doc_id < result.best_doc)) {
            result.score = s;
            result.best_doc = doc_id;
        }
        found = true;
    }
    if (!found) throw AbsentTermError(key);
    return result;
}

double tfidf_normalized(const MoiKey& key, const DocumentIndex& doc, const CorpusIndex& index,
                        LogBase base) {
    auto tf_it = doc.tf.find(key);
    if (tf_it == doc.tf.end()) throw AbsentTermError(key);
    if (doc.length == 0) throw std::invalid_argument("tfidf on an empty document");
    double norm_tf = static_cast<double>(tf_it->second) / static_cast<double>(doc.length);
    return norm_tf * idf(index.records.at(key), index.stats, base);
}

bool scored_before(const ScoredMoi& a, const ScoredMoi& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.df != b.df) return a.df > b.df;
    return a.key < b.key;
}

void sort_scored(std::vector<ScoredMoi>& results) {
    std::sort(results.begin(), results.end(), scored_before);
}

}  // namespace moi
