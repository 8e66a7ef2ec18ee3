#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "moi/mathml.hpp"
#include "moi/serialize.hpp"

namespace moi {

// Per-document term frequencies over canonical keys. `length` is the number
// of subexpression occurrences (the document length for ranking purposes);
// max_tf_by_complexity backs the complexity-grouped maximum in the document
// score denominator.
struct DocumentIndex {
    std::string doc_id;
    std::map<MoiKey, uint64_t> tf;
    uint64_t length = 0;
    std::map<uint32_t, uint64_t> max_tf_by_complexity;
    uint64_t formula_count = 0;

    bool operator==(const DocumentIndex&) const = default;
};

struct MoiRecord {
    MoiKey key;
    uint32_t complexity = 0;
    uint64_t total_tf = 0;
    uint64_t df = 0;

    bool operator==(const MoiRecord&) const = default;
};

struct CorpusStats {
    uint64_t n_documents = 0;
    uint64_t n_formulae = 0;
    uint64_t n_occurrences = 0;
    uint64_t n_unique = 0;
    double avg_doc_length = 0.0;
    double avg_complexity = 0.0;
    uint32_t max_complexity = 0;

    bool operator==(const CorpusStats&) const = default;
};

struct CorpusIndex {
    std::map<MoiKey, MoiRecord> records;
    std::map<std::string, DocumentIndex> documents;
    CorpusStats stats;
    std::string shard_label;

    bool operator==(const CorpusIndex&) const = default;
};

uint32_t key_complexity(const MoiKey& key);

// Counts every identifier-bearing subexpression of every formula, with
// multiplicity. Formulae are expected to have passed filter_formula.
DocumentIndex ingest_document(std::string doc_id, std::span<const MathTree> formulae);

class CorpusIndexBuilder {
public:
    explicit CorpusIndexBuilder(std::string shard_label = {});

    // Throws DuplicateDocumentError on a repeated doc_id.
    void add(DocumentIndex doc);

    CorpusIndex finish();

private:
    CorpusIndex index_;
};

// Deterministic result regardless of input order and worker count.
CorpusIndex build_index(std::span<const std::pair<std::string, std::vector<MathTree>>> documents,
                        unsigned workers = 1, std::string shard_label = {});

CorpusStats corpus_stats(const std::map<MoiKey, MoiRecord>& records,
                         const std::map<std::string, DocumentIndex>& documents);

// Equals build_index over the union stream; doc_id sets must be disjoint.
CorpusIndex merge_shards(std::span<const CorpusIndex> shards);

// Versioned, checksummed binary container; save/load round-trips bit-exactly.
// load_index throws IoError with a kind distinguishing missing file, foreign
// format, version mismatch, checksum failure, and truncation.
void save_index(const CorpusIndex& index, const std::string& path);
CorpusIndex load_index(const std::string& path);

std::string encode_index(const CorpusIndex& index);
CorpusIndex decode_index(std::string_view bytes);

// key <TAB> complexity <TAB> total_tf <TAB> df, one row per record.
void export_records_tsv(const CorpusIndex& index, const std::string& path);

}  // namespace moi
