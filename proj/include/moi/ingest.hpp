#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <string>
#include <vector>

#include "moi/index.hpp"
#include "moi/text_index.hpp"

namespace moi {

// Corpus input is line-delimited JSON, one document per line:
//   {"id": "...", "text": "...", "formulae": ["<math>...</math>", ...]}
// "text" feeds the text index and may be absent.

struct IngestOptions {
    unsigned workers = 1;
    bool strict = false;  // abort on the first malformed document or formula
    std::string shard_label;
    bool with_text_index = true;
};

struct IngestReport {
    uint64_t documents = 0;
    uint64_t documents_skipped = 0;
    uint64_t formulae_seen = 0;
    uint64_t formulae_kept = 0;
    uint64_t formulae_rejected = 0;
    std::map<std::string, uint64_t> reject_reasons;     // reason -> count
    std::map<std::string, uint64_t> foreign_tag_counts; // stripped element -> count
    std::vector<std::string> messages;                  // skip log
};

struct IngestOutput {
    CorpusIndex corpus;
    text::TextIndex text;
    IngestReport report;
};

// Throws IngestError in strict mode; lenient mode skips and logs.
class IngestError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

IngestOutput ingest_corpus(std::istream& in, const IngestOptions& options = {});
IngestOutput ingest_corpus_file(const std::string& path, const IngestOptions& options = {});

}  // namespace moi
