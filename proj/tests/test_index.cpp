#include "moi/index.hpp"

#include <doctest.h>
#include <zlib.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>

#include "moi/errors.hpp"
#include "testutil.hpp"

using namespace moi;

namespace {

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

std::vector<tu::DocSpec> random_corpus(std::mt19937_64& rng, size_t n_docs) {
    tu::TreeGenOptions opts;
    opts.max_depth = 5;
    std::vector<tu::DocSpec> docs;
    for (size_t d = 0; d < n_docs; ++d) {
        std::vector<MathTree> formulae;
        size_t n_formulae = rng() % 6;
        for (size_t f = 0; f < n_formulae; ++f) {
            formulae.push_back(tu::as_tree(tu::random_tree(rng, opts)));
        }
        docs.push_back({"doc-" + std::to_string(d), std::move(formulae)});
    }
    return docs;
}

}  // namespace

TEST_CASE("single Jacobi document has length 9") {
    std::vector<MathTree> formulae = {tu::as_tree(tu::jacobi_tree())};
    DocumentIndex doc = ingest_document("d", formulae);
    CHECK(doc.length == 9);
    CHECK(doc.tf.size() == 9);
    CHECK(doc.formula_count == 1);
    CHECK(doc.max_tf_by_complexity.at(1) == 1);
    CHECK(doc.max_tf_by_complexity.at(4) == 1);
}

TEST_CASE("empty document") {
    DocumentIndex doc = ingest_document("d", {});
    CHECK(doc.length == 0);
    CHECK(doc.tf.empty());
}

TEST_CASE("repeated formula accumulates term frequency") {
    std::vector<MathTree> formulae = {tu::as_tree(tu::mi("x")), tu::as_tree(tu::mi("x"))};
    DocumentIndex doc = ingest_document("d", formulae);
    CHECK(doc.tf.at("mi:x") == 2);
    CHECK(doc.length == 2);
    CHECK(doc.max_tf_by_complexity.at(1) == 2);
}

TEST_CASE("document length equals the sum of term frequencies") {
    std::mt19937_64 rng(42);
    for (const auto& [id, formulae] : random_corpus(rng, 30)) {
        DocumentIndex doc = ingest_document(id, formulae);
        uint64_t total = 0;
        for (const auto& [key, tf] : doc.tf) total += tf;
        CHECK(doc.length == total);
        // max_tf_by_complexity is recomputable
        std::map<uint32_t, uint64_t> recomputed;
        for (const auto& [key, tf] : doc.tf) {
            uint64_t& m = recomputed[key_complexity(key)];
            m = std::max(m, tf);
        }
        CHECK(doc.max_tf_by_complexity == recomputed);
    }
}

TEST_CASE("df counts distinct documents") {
    std::vector<tu::DocSpec> docs = {
        {"a", {tu::as_tree(tu::mi("x"))}},
        {"b", {tu::as_tree(tu::mi("x"))}},
    };
    CorpusIndex index = build_index(docs);
    CHECK(index.records.at("mi:x").total_tf == 2);
    CHECK(index.records.at("mi:x").df == 2);

    std::vector<tu::DocSpec> docs2 = {
        {"a", {tu::as_tree(tu::mi("x")), tu::as_tree(tu::mi("x"))}},
        {"b", {}},
    };
    CorpusIndex index2 = build_index(docs2);
    CHECK(index2.records.at("mi:x").total_tf == 2);
    CHECK(index2.records.at("mi:x").df == 1);
}

TEST_CASE("three identical Jacobi documents") {
    std::vector<tu::DocSpec> docs;
    for (int i = 0; i < 3; ++i) {
        docs.push_back({"doc-" + std::to_string(i), {tu::as_tree(tu::jacobi_tree())}});
    }
    CorpusIndex index = build_index(docs);
    CHECK(index.stats.n_unique == 9);
    CHECK(index.stats.n_documents == 3);
    CHECK(index.stats.n_formulae == 3);
    for (const auto& [key, rec] : index.records) CHECK(rec.df == 3);
}

TEST_CASE("duplicate doc ids are rejected") {
    CorpusIndexBuilder builder;
    builder.add(ingest_document("same", {}));
    CHECK_THROWS_AS(builder.add(ingest_document("same", {})), DuplicateDocumentError);
}

TEST_CASE("corpus stats") {
    // lengths 9 and 1
    std::vector<tu::DocSpec> docs = {
        {"a", {tu::as_tree(tu::jacobi_tree())}},
        {"b", {tu::as_tree(tu::mi("q"))}},
    };
    CorpusIndex index = build_index(docs);
    CHECK(index.stats.avg_doc_length == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(index.stats.n_occurrences == 10);
    CHECK(index.stats.max_complexity == 4);

    CorpusIndex empty = build_index({});
    CHECK(empty.stats.n_documents == 0);
    CHECK(empty.stats.avg_doc_length == 0.0);
    CHECK(empty.stats.avg_complexity == 0.0);
}

TEST_CASE("stats are consistent with documents") {
    std::mt19937_64 rng(77);
    CorpusIndex index = tu::build_corpus(random_corpus(rng, 40));
    uint64_t sum_lengths = 0;
    for (const auto& [id, doc] : index.documents) sum_lengths += doc.length;
    CHECK(index.stats.n_occurrences == sum_lengths);
    uint64_t df_max = index.stats.n_documents;
    for (const auto& [key, rec] : index.records) {
        CHECK(rec.df >= 1);
        CHECK(rec.df <= std::min(rec.total_tf, df_max));
    }
    CHECK(corpus_stats(index.records, index.documents) == index.stats);
}

TEST_CASE("save/load round trip") {
    std::vector<tu::DocSpec> docs = {{"a", {tu::as_tree(tu::jacobi_tree())}}};
    CorpusIndex index = build_index(docs, 1, "fixtures");
    auto path = temp_file("moi_test_index.bin");
    save_index(index, path.string());
    CorpusIndex loaded = load_index(path.string());
    CHECK(loaded == index);
    // and the reserialization is bit-identical
    CHECK(encode_index(loaded) == encode_index(index));
    std::filesystem::remove(path);
}

TEST_CASE("load failure modes are distinct") {
    auto path = temp_file("moi_test_bad_index.bin");

    {
        std::ofstream(path).close();  // empty file
        try {
            load_index(path.string());
            FAIL("expected IoError");
        } catch (const IoError& e) {
            CHECK(e.kind() == IoErrorKind::truncated);
        }
    }
    {
        std::ofstream out(path, std::ios::trunc | std::ios::binary);
        out << "this is not an index file at all";
    }
    try {
        load_index(path.string());
        FAIL("expected IoError");
    } catch (const IoError& e) {
        CHECK(e.kind() == IoErrorKind::bad_magic);
    }

    CorpusIndex index = build_index({{{"a", {tu::as_tree(tu::mi("x"))}}}});
    std::string bytes = encode_index(index);
    {
        // flip one payload byte
        std::string corrupted = bytes;
        corrupted[corrupted.size() / 2] ^= 0x40;
        std::ofstream out(path, std::ios::trunc | std::ios::binary);
        out.write(corrupted.data(), static_cast<std::streamsize>(corrupted.size()));
    }
    try {
        load_index(path.string());
        FAIL("expected IoError");
    } catch (const IoError& e) {
        CHECK(e.kind() == IoErrorKind::checksum_mismatch);
    }
    {
        // bump the version field (bytes 4..7), fix the checksum
        std::string versioned = bytes;
        versioned[4] = 99;
        std::string body = versioned.substr(0, versioned.size() - 4);
        uLong crc = crc32(0L, Z_NULL, 0);
        crc = crc32(crc, reinterpret_cast<const Bytef*>(body.data()),
                    static_cast<uInt>(body.size()));
        for (int i = 0; i < 4; ++i) {
            versioned[versioned.size() - 4 + i] =
                static_cast<char>((static_cast<uint32_t>(crc) >> (8 * i)) & 0xFF);
        }
        std::ofstream out(path, std::ios::trunc | std::ios::binary);
        out.write(versioned.data(), static_cast<std::streamsize>(versioned.size()));
    }
    try {
        load_index(path.string());
        FAIL("expected IoError");
    } catch (const IoError& e) {
        CHECK(e.kind() == IoErrorKind::version_mismatch);
    }

    CHECK_THROWS_AS(load_index("/nonexistent/nowhere.idx"), IoError);
    std::filesystem::remove(path);
}

TEST_CASE("merge of a single shard is the identity") {
    std::mt19937_64 rng(5);
    CorpusIndex index = tu::build_corpus(random_corpus(rng, 10));
    std::vector<CorpusIndex> shards = {index};
    CHECK(merge_shards(shards) == index);
}

TEST_CASE("merge combines document frequencies") {
    CorpusIndex a = build_index({{{"a", {tu::as_tree(tu::mi("x"))}}}});
    CorpusIndex b = build_index({{{"b", {tu::as_tree(tu::mi("x"))}}}});
    std::vector<CorpusIndex> shards = {a, b};
    CorpusIndex merged = merge_shards(shards);
    CHECK(merged.records.at("mi:x").df == 2);
    CHECK(merged.stats.n_documents == 2);

    std::vector<CorpusIndex> reversed = {b, a};
    CHECK(merge_shards(reversed) == merged);  // commutativity
}

TEST_CASE("merge rejects doc_id collisions") {
    CorpusIndex a = build_index({{{"same", {tu::as_tree(tu::mi("x"))}}}});
    CorpusIndex b = build_index({{{"same", {tu::as_tree(tu::mi("y"))}}}});
    std::vector<CorpusIndex> shards = {a, b};
    CHECK_THROWS_AS(merge_shards(shards), DuplicateDocumentError);
}

TEST_CASE("order independence and shard equivalence") {
    std::mt19937_64 rng(99);
    std::vector<tu::DocSpec> docs = random_corpus(rng, 24);
    CorpusIndex baseline = build_index(docs);
    std::string baseline_bytes = encode_index(baseline);

    for (int round = 0; round < 5; ++round) {
        std::shuffle(docs.begin(), docs.end(), rng);
        CHECK(encode_index(build_index(docs)) == baseline_bytes);

        // random partition into 3 shards, built independently, then merged
        std::vector<std::vector<tu::DocSpec>> parts(3);
        for (const auto& doc : docs) parts[rng() % 3].push_back(doc);
        std::vector<CorpusIndex> shards;
        for (auto& part : parts) shards.push_back(build_index(part));
        CHECK(encode_index(merge_shards(shards)) == baseline_bytes);
    }

    // worker count does not change the result
    CHECK(encode_index(build_index(docs, 4)) == baseline_bytes);
}

TEST_CASE("tsv export shape") {
    std::vector<tu::DocSpec> docs = {{"a", {tu::as_tree(tu::row({tu::mi("x")}))}}};
    CorpusIndex index = build_index(docs);
    auto path = temp_file("moi_test_records.tsv");
    export_records_tsv(index, path.string());
    std::ifstream in(path);
    std::string header, line1, line2;
    std::getline(in, header);
    std::getline(in, line1);
    std::getline(in, line2);
    CHECK(header == "key\tcomplexity\ttotal_tf\tdf");
    CHECK(line1 == "mi:x\t1\t1\t1");
    CHECK(line2 == "mrow(mi:x)\t2\t1\t1");
    std::filesystem::remove(path);
}
