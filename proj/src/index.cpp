#include "moi/index.hpp"

#include <zlib.h>

#include <algorithm>
#include <atomic>
#include <cstring>
#include <fstream>
#include <thread>

#include "moi/errors.hpp"

namespace moi {

namespace {

constexpr char kMagic[4] = {'M', 'O', 'I', 'X'};
constexpr uint32_t kFormatVersion = 1;

void put_u32(std::string& out, uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u64(std::string& out, uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_f64(std::string& out, double v) {
    uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    put_u64(out, bits);
}

void put_str(std::string& out, std::string_view s) {
    put_u32(out, static_cast<uint32_t>(s.size()));
    out.append(s);
}

class ByteReader {
public:
    explicit ByteReader(std::string_view in) : in_(in) {}

    uint32_t u32() {
        need(4);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(byte(pos_ + i)) << (8 * i);
        pos_ += 4;
        return v;
    }

    uint64_t u64() {
        need(8);
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(byte(pos_ + i)) << (8 * i);
        pos_ += 8;
        return v;
    }

    double f64() {
        uint64_t bits = u64();
        double v;
        std::memcpy(&v, &bits, sizeof v);
        return v;
    }

    std::string str() {
        uint32_t n = u32();
        need(n);
        std::string s(in_.substr(pos_, n));
        pos_ += n;
        return s;
    }

    bool done() const { return pos_ == in_.size(); }

private:
    void need(size_t n) const {
        if (pos_ + n > in_.size()) {
            throw IoError(IoErrorKind::truncated, "index file truncated");
        }
    }

    unsigned char byte(size_t i) const { return static_cast<unsigned char>(in_[i]); }

    std::string_view in_;
    size_t pos_ = 0;
};

uint32_t crc_of(std::string_view bytes) {
    uLong crc = crc32(0L, Z_NULL, 0);
    return static_cast<uint32_t>(
        crc32(crc, reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(bytes.size())));
}

}  // namespace

uint32_t key_complexity(const MoiKey& key) {
    return complexity(deserialize(key));
}

DocumentIndex ingest_document(std::string doc_id, std::span<const MathTree> formulae) {
    DocumentIndex doc;
    doc.doc_id = std::move(doc_id);
    doc.formula_count = formulae.size();
    for (const MathTree& tree : formulae) {
        for (MoiOccurrence& occ : enumerate_mois(tree)) {
            uint64_t& count = doc.tf[std::move(occ.key)];
            ++count;
            ++doc.length;
            uint64_t& max_tf = doc.max_tf_by_complexity[occ.complexity];
            max_tf = std::max(max_tf, count);
        }
    }
    return doc;
}

CorpusIndexBuilder::CorpusIndexBuilder(std::string shard_label) {
    index_.shard_label = std::move(shard_label);
}

void CorpusIndexBuilder::add(DocumentIndex doc) {
    if (index_.documents.contains(doc.doc_id)) throw DuplicateDocumentError(doc.doc_id);
    for (const auto& [key, tf] : doc.tf) {
        auto [it, inserted] = index_.records.try_emplace(key);
        MoiRecord& rec = it->second;
        if (inserted) {
            rec.key = key;
            rec.complexity = key_complexity(key);
        }
        rec.total_tf += tf;
        rec.df += 1;
    }
    index_.documents.emplace(doc.doc_id, std::move(doc));
}

CorpusIndex CorpusIndexBuilder::finish() {
    index_.stats = corpus_stats(index_.records, index_.documents);
    return std::move(index_);
}

CorpusStats corpus_stats(const std::map<MoiKey, MoiRecord>& records,
                         const std::map<std::string, DocumentIndex>& documents) {
    CorpusStats stats;
    stats.n_documents = documents.size();
    stats.n_unique = records.size();
    uint64_t weighted_complexity = 0;
    for (const auto& [key, rec] : records) {
        stats.n_occurrences += rec.total_tf;
        stats.max_complexity = std::max(stats.max_complexity, rec.complexity);
        weighted_complexity += rec.complexity * rec.total_tf;
    }
    for (const auto& [id, doc] : documents) stats.n_formulae += doc.formula_count;
    if (stats.n_documents > 0) {
        stats.avg_doc_length =
            static_cast<double>(stats.n_occurrences) / static_cast<double>(stats.n_documents);
    }
    if (stats.n_occurrences > 0) {
        stats.avg_complexity =
            static_cast<double>(weighted_complexity) / static_cast<double>(stats.n_occurrences);
    }
    return stats;
}

CorpusIndex build_index(std::span<const std::pair<std::string, std::vector<MathTree>>> documents,
                        unsigned workers, std::string shard_label) {
    std::vector<DocumentIndex> partials(documents.size());
    if (workers <= 1 || documents.size() < 2) {
        for (size_t i = 0; i < documents.size(); ++i) {
            partials[i] = ingest_document(documents[i].first, documents[i].second);
        }
    } else {
        std::atomic<size_t> next{0};
        auto run = [&] {
            for (size_t i = next.fetch_add(1); i < documents.size(); i = next.fetch_add(1)) {
                partials[i] = ingest_document(documents[i].first, documents[i].second);
            }
        };
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
        for (auto& t : pool) t.join();
    }
    CorpusIndexBuilder builder(std::move(shard_label));
    for (DocumentIndex& doc : partials) builder.add(std::move(doc));
    return builder.finish();
}

CorpusIndex merge_shards(std::span<const CorpusIndex> shards) {
    CorpusIndex merged;
    bool uniform_label = !shards.empty();
    for (const CorpusIndex& shard : shards) {
        if (uniform_label && shard.shard_label != shards.front().shard_label) {
            uniform_label = false;
        }
        for (const auto& [id, doc] : shard.documents) {
            if (merged.documents.contains(id)) throw DuplicateDocumentError(id);
            merged.documents.emplace(id, doc);
        }
        for (const auto& [key, rec] : shard.records) {
            auto [it, inserted] = merged.records.try_emplace(key, rec);
            if (!inserted) {
                it->second.total_tf += rec.total_tf;
                it->second.df += rec.df;
            }
        }
    }
    if (uniform_label) merged.shard_label = shards.front().shard_label;
    merged.stats = corpus_stats(merged.records, merged.documents);
    return merged;
}

std::string encode_index(const CorpusIndex& index) {
    std::string out;
    out.append(kMagic, sizeof kMagic);
    put_u32(out, kFormatVersion);
    put_str(out, index.shard_label);

    const CorpusStats& s = index.stats;
    put_u64(out, s.n_documents);
    put_u64(out, s.n_formulae);
    put_u64(out, s.n_occurrences);
    put_u64(out, s.n_unique);
    put_f64(out, s.avg_doc_length);
    put_f64(out, s.avg_complexity);
    put_u32(out, s.max_complexity);

    put_u64(out, index.records.size());
    std::map<MoiKey, uint64_t> key_ordinal;
    uint64_t ordinal = 0;
    for (const auto& [key, rec] : index.records) {
        put_str(out, key);
        put_u32(out, rec.complexity);
        put_u64(out, rec.total_tf);
        put_u64(out, rec.df);
        key_ordinal.emplace(key, ordinal++);
    }

    put_u64(out, index.documents.size());
    for (const auto& [id, doc] : index.documents) {
        put_str(out, id);
        put_u64(out, doc.formula_count);
        put_u64(out, doc.length);
        put_u32(out, static_cast<uint32_t>(doc.tf.size()));
        for (const auto& [key, tf] : doc.tf) {
            put_u64(out, key_ordinal.at(key));
            put_u64(out, tf);
        }
    }

    put_u32(out, crc_of(out));
    return out;
}

CorpusIndex decode_index(std::string_view bytes) {
    if (bytes.size() < sizeof kMagic + 8) {
        throw IoError(IoErrorKind::truncated, "index file truncated");
    }
    if (std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) {
        throw IoError(IoErrorKind::bad_magic, "not an index file");
    }
    uint32_t stored_crc = 0;
    for (int i = 0; i < 4; ++i) {
        stored_crc |= static_cast<uint32_t>(static_cast<unsigned char>(bytes[bytes.size() - 4 + i]))
                      << (8 * i);
    }
    std::string_view body = bytes.substr(0, bytes.size() - 4);

    ByteReader reader(body.substr(sizeof kMagic));
    uint32_t version = reader.u32();
    if (version != kFormatVersion) {
        throw IoError(IoErrorKind::version_mismatch,
                      "unsupported index version " + std::to_string(version));
    }
    if (crc_of(body) != stored_crc) {
        throw IoError(IoErrorKind::checksum_mismatch, "index checksum mismatch");
    }

    CorpusIndex index;
    index.shard_label = reader.str();
    CorpusStats& s = index.stats;
    s.n_documents = reader.u64();
    s.n_formulae = reader.u64();
    s.n_occurrences = reader.u64();
    s.n_unique = reader.u64();
    s.avg_doc_length = reader.f64();
    s.avg_complexity = reader.f64();
    s.max_complexity = reader.u32();

    uint64_t n_records = reader.u64();
    std::vector<const MoiKey*> keys_by_ordinal;
    keys_by_ordinal.reserve(n_records);
    std::vector<uint32_t> complexity_by_ordinal;
    complexity_by_ordinal.reserve(n_records);
    for (uint64_t i = 0; i < n_records; ++i) {
        MoiRecord rec;
        rec.key = reader.str();
        rec.complexity = reader.u32();
        rec.total_tf = reader.u64();
        rec.df = reader.u64();
        complexity_by_ordinal.push_back(rec.complexity);
        auto [it, inserted] = index.records.emplace(rec.key, std::move(rec));
        if (!inserted) throw IoError(IoErrorKind::read_failed, "duplicate record key");
        keys_by_ordinal.push_back(&it->first);
    }

    uint64_t n_docs = reader.u64();
    for (uint64_t i = 0; i < n_docs; ++i) {
        DocumentIndex doc;
        doc.doc_id = reader.str();
        doc.formula_count = reader.u64();
        doc.length = reader.u64();
        uint32_t n_entries = reader.u32();
        for (uint32_t e = 0; e < n_entries; ++e) {
            uint64_t ord = reader.u64();
            uint64_t tf = reader.u64();
            if (ord >= keys_by_ordinal.size()) {
                throw IoError(IoErrorKind::read_failed, "key ordinal out of range");
            }
            doc.tf.emplace(*keys_by_ordinal[ord], tf);
            uint64_t& max_tf = doc.max_tf_by_complexity[complexity_by_ordinal[ord]];
            max_tf = std::max(max_tf, tf);
        }
        index.documents.emplace(doc.doc_id, std::move(doc));
    }
    if (!reader.done()) throw IoError(IoErrorKind::read_failed, "trailing bytes in index file");
    return index;
}

void save_index(const CorpusIndex& index, const std::string& path) {
    std::string bytes = encode_index(index);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(IoErrorKind::open_failed, "cannot open for writing: " + path);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError(IoErrorKind::write_failed, "write failed: " + path);
}

CorpusIndex load_index(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(IoErrorKind::open_failed, "cannot open: " + path);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError(IoErrorKind::read_failed, "read failed: " + path);
    return decode_index(bytes);
}

void export_records_tsv(const CorpusIndex& index, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError(IoErrorKind::open_failed, "cannot open for writing: " + path);
    out << "key\tcomplexity\ttotal_tf\tdf\n";
    for (const auto& [key, rec] : index.records) {
        out << key << '\t' << rec.complexity << '\t' << rec.total_tf << '\t' << rec.df << '\n';
    }
    if (!out) throw IoError(IoErrorKind::write_failed, "write failed: " + path);
}

}  // namespace moi
