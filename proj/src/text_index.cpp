#include "moi/text_index.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "moi/analyze.hpp"
#include "moi/errors.hpp"

namespace moi::text {

namespace {

constexpr char kMagic[4] = {'M', 'O', 'I', 'T'};
constexpr uint32_t kFormatVersion = 1;
constexpr double kTextK = 1.2;
constexpr double kTextB = 0.75;

void put_u32(std::string& out, uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u64(std::string& out, uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
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
        for (int i = 0; i < 4; ++i) {
            v |= static_cast<uint32_t>(static_cast<unsigned char>(in_[pos_ + i])) << (8 * i);
        }
        pos_ += 4;
        return v;
    }

    uint64_t u64() {
        need(8);
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) {
            v |= static_cast<uint64_t>(static_cast<unsigned char>(in_[pos_ + i])) << (8 * i);
        }
        pos_ += 8;
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
            throw IoError(IoErrorKind::truncated, "text index truncated");
        }
    }

    std::string_view in_;
    size_t pos_ = 0;
};

uint32_t crc_of(std::string_view bytes) {
    uLong crc = crc32(0L, Z_NULL, 0);
    return static_cast<uint32_t>(
        crc32(crc, reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(bytes.size())));
}

}  // namespace

void TextIndex::add_document(std::string doc_id, std::string_view body) {
    uint32_t ordinal = static_cast<uint32_t>(doc_ids_.size());
    std::vector<std::string> tokens = analyze(body);
    doc_lengths_.push_back(tokens.size());
    total_tokens_ += tokens.size();

    std::map<std::string, uint32_t> counts;
    for (std::string& tok : tokens) ++counts[std::move(tok)];
    for (auto& [tok, tf] : counts) postings_[tok].push_back({ordinal, tf});
    doc_ids_.push_back(std::move(doc_id));
}

std::vector<std::string> TextIndex::search(std::string_view query, size_t top_k) const {
    std::vector<std::string> tokens = analyze(query);
    if (tokens.empty()) throw EmptyQueryError();
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());

    double n_docs = static_cast<double>(doc_ids_.size());
    double avg_len = doc_ids_.empty() ? 0.0 : static_cast<double>(total_tokens_) / n_docs;

    std::map<uint32_t, double> scores;
    for (const std::string& tok : tokens) {
        auto it = postings_.find(tok);
        if (it == postings_.end()) continue;
        double df = static_cast<double>(it->second.size());
        double token_idf = std::log((n_docs - df + 0.5) / (df + 0.5));
        for (const Posting& p : it->second) {
            double tf = p.tf;
            double norm =
                1.0 - kTextB + kTextB * static_cast<double>(doc_lengths_[p.doc]) / avg_len;
            scores[p.doc] += (kTextK + 1.0) * token_idf * tf / (tf + kTextK * norm);
        }
    }

    std::vector<std::pair<double, uint32_t>> ranked;
    ranked.reserve(scores.size());
    for (auto [doc, score] : scores) ranked.push_back({score, doc});
    std::sort(ranked.begin(), ranked.end(), [&](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return doc_ids_[a.second] < doc_ids_[b.second];
    });
    if (ranked.size() > top_k) ranked.resize(top_k);

    std::vector<std::string> out;
    out.reserve(ranked.size());
    for (auto [score, doc] : ranked) out.push_back(doc_ids_[doc]);
    return out;
}

std::string TextIndex::encode() const {
    std::string out;
    out.append(kMagic, sizeof kMagic);
    put_u32(out, kFormatVersion);
    put_u32(out, static_cast<uint32_t>(doc_ids_.size()));
    for (size_t i = 0; i < doc_ids_.size(); ++i) {
        put_str(out, doc_ids_[i]);
        put_u64(out, doc_lengths_[i]);
    }
    put_u64(out, total_tokens_);
    put_u64(out, postings_.size());
    for (const auto& [tok, list] : postings_) {
        put_str(out, tok);
        put_u32(out, static_cast<uint32_t>(list.size()));
        for (const Posting& p : list) {
            put_u32(out, p.doc);
            put_u32(out, p.tf);
        }
    }
    put_u32(out, crc_of(out));
    return out;
}

TextIndex TextIndex::decode(std::string_view bytes) {
    if (bytes.size() < sizeof kMagic + 8) {
        throw IoError(IoErrorKind::truncated, "text index truncated");
    }
    if (std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) {
        throw IoError(IoErrorKind::bad_magic, "not a text index file");
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
                      "unsupported text index version " + std::to_string(version));
    }
    if (crc_of(body) != stored_crc) {
        throw IoError(IoErrorKind::checksum_mismatch, "text index checksum mismatch");
    }

    TextIndex idx;
    uint32_t n_docs = reader.u32();
    idx.doc_ids_.reserve(n_docs);
    idx.doc_lengths_.reserve(n_docs);
    for (uint32_t i = 0; i < n_docs; ++i) {
        idx.doc_ids_.push_back(reader.str());
        idx.doc_lengths_.push_back(reader.u64());
    }
    idx.total_tokens_ = reader.u64();
    uint64_t n_tokens = reader.u64();
    for (uint64_t i = 0; i < n_tokens; ++i) {
        std::string tok = reader.str();
        uint32_t n_postings = reader.u32();
        std::vector<Posting> list;
        list.reserve(n_postings);
        for (uint32_t p = 0; p < n_postings; ++p) {
            Posting posting;
            posting.doc = reader.u32();
            posting.tf = reader.u32();
            if (posting.doc >= n_docs) {
                throw IoError(IoErrorKind::read_failed, "posting ordinal out of range");
            }
            list.push_back(posting);
        }
        idx.postings_.emplace(std::move(tok), std::move(list));
    }
    if (!reader.done()) throw IoError(IoErrorKind::read_failed, "trailing bytes in text index");
    return idx;
}

void TextIndex::save(const std::string& path) const {
    std::string bytes = encode();
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(IoErrorKind::open_failed, "cannot open for writing: " + path);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError(IoErrorKind::write_failed, "write failed: " + path);
}

TextIndex TextIndex::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(IoErrorKind::open_failed, "cannot open: " + path);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError(IoErrorKind::read_failed, "read failed: " + path);
    return decode(bytes);
}

}  // namespace moi::text
