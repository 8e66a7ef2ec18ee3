#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace moi::text {

// Inverted index over analyzed document text, scored with Okapi BM25
// (k = 1.2, b = 0.75). Documents keep their insertion ordinals so builds are
// reproducible; queries are read-only and safe to run concurrently.
class TextIndex {
public:
    void add_document(std::string doc_id, std::string_view body);

    // Top k document ids by summed per-token BM25, ties broken by id bytes.
    // Only documents containing at least one query token are returned.
    // Throws EmptyQueryError when the query analyzes to nothing.
    std::vector<std::string> search(std::string_view query, size_t top_k) const;

    size_t document_count() const { return doc_ids_.size(); }

    void save(const std::string& path) const;
    static TextIndex load(const std::string& path);

    std::string encode() const;
    static TextIndex decode(std::string_view bytes);

    bool operator==(const TextIndex&) const = default;

private:
    struct Posting {
        uint32_t doc = 0;  // ordinal into doc_ids_
        uint32_t tf = 0;

        bool operator==(const Posting&) const = default;
    };

    std::vector<std::string> doc_ids_;
    std::vector<uint64_t> doc_lengths_;  // token counts
    std::map<std::string, std::vector<Posting>> postings_;
    uint64_t total_tokens_ = 0;
};

}  // namespace moi::text
