#include "moi/distribution.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "testutil.hpp"

using namespace moi;

namespace {

CorpusIndex counted_corpus() {
    // mi:x appears 5 times, mi:y 3 times, mi:z once, all in one document
    std::vector<MathTree> formulae;
    for (int i = 0; i < 5; ++i) formulae.push_back(tu::as_tree(tu::mi("x")));
    for (int i = 0; i < 3; ++i) formulae.push_back(tu::as_tree(tu::mi("y")));
    formulae.push_back(tu::as_tree(tu::mi("z")));
    return tu::build_corpus({{"d", std::move(formulae)}});
}

std::vector<double> model_frequencies(double c, double alpha, double beta, size_t n) {
    std::vector<double> f(n);
    for (size_t r = 1; r <= n; ++r) {
        f[r - 1] = c / std::pow(static_cast<double>(r) + beta, alpha);
    }
    return f;
}

}  // namespace

TEST_CASE("rank table ordering and ranks") {
    RankTable table = rank_table(counted_corpus());
    REQUIRE(table.entries.size() == 3);
    CHECK(table.entries[0].key == "mi:x");
    CHECK(table.entries[0].frequency == 5);
    CHECK(table.entries[0].rank == 1);
    CHECK(table.entries[1].key == "mi:y");
    CHECK(table.entries[2].key == "mi:z");
    CHECK(table.entries[2].rank == 3);
}

TEST_CASE("rank table tie break is lexicographic") {
    std::vector<MathTree> formulae = {tu::as_tree(tu::mi("b")), tu::as_tree(tu::mi("a"))};
    RankTable table = rank_table(tu::build_corpus({{"d", std::move(formulae)}}));
    CHECK(table.entries[0].key == "mi:a");
    CHECK(table.entries[1].key == "mi:b");
}

TEST_CASE("rank table filters") {
    CorpusIndex index =
        tu::build_corpus({{"d", {tu::as_tree(tu::row({tu::mi("x")})), tu::as_tree(tu::mi("x"))}}});
    RankTable c1 = rank_table(index, 1);
    REQUIRE(c1.entries.size() == 1);
    CHECK(c1.entries[0].key == "mi:x");

    RankTable high_df = rank_table(index, std::nullopt, 2);
    CHECK(high_df.entries.empty());  // df is 1 everywhere

    RankTable empty = rank_table(CorpusIndex{});
    CHECK(empty.entries.empty());
}

TEST_CASE("rank table is a permutation of the filtered records") {
    std::mt19937_64 rng(4);
    tu::TreeGenOptions opts;
    opts.max_depth = 5;
    std::vector<tu::DocSpec> docs;
    for (int d = 0; d < 10; ++d) {
        std::vector<MathTree> formulae;
        for (int f = 0; f < 4; ++f) formulae.push_back(tu::as_tree(tu::random_tree(rng, opts)));
        docs.push_back({"doc-" + std::to_string(d), std::move(formulae)});
    }
    CorpusIndex index = tu::build_corpus(docs);
    RankTable table = rank_table(index);
    CHECK(table.entries.size() == index.records.size());
    std::set<std::string> seen;
    for (size_t i = 0; i < table.entries.size(); ++i) {
        CHECK(table.entries[i].rank == i + 1);
        if (i > 0) CHECK(table.entries[i - 1].frequency >= table.entries[i].frequency);
        CHECK(index.records.contains(table.entries[i].key));
        seen.insert(table.entries[i].key);
    }
    CHECK(seen.size() == table.entries.size());
}

TEST_CASE("zipf parameter recovery") {
    std::vector<double> freqs = model_frequencies(1000.0, 1.0, 2.7, 10000);
    ZipfFit fit = fit_zipf(freqs, true);
    CHECK(fit.alpha == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(fit.beta == doctest::Approx(2.7).epsilon(1e-4));
    CHECK(fit.c == doctest::Approx(1000.0).epsilon(1e-4));
    CHECK(fit.fit_error < 1e-9);
}

TEST_CASE("unshifted fit has beta zero") {
    std::vector<double> freqs = model_frequencies(500.0, 1.2, 0.0, 2000);
    ZipfFit fit = fit_zipf(freqs, false);
    CHECK(fit.beta == 0.0);
    CHECK(fit.alpha == doctest::Approx(1.2).epsilon(1e-9));
}

TEST_CASE("flat table fits with no decay") {
    std::vector<double> freqs(100, 50.0);
    ZipfFit shifted = fit_zipf(freqs, true);
    CHECK(std::abs(shifted.alpha) < 1e-6);
    ZipfFit plain = fit_zipf(freqs, false);
    CHECK(std::abs(plain.alpha) < 1e-12);
}

TEST_CASE("too few points") {
    std::vector<double> two = {10.0, 5.0};
    CHECK_THROWS_AS(fit_zipf(two, true), std::invalid_argument);
    std::vector<double> padded = {10.0, 5.0, 0.0, 0.0};  // zeros do not count
    CHECK_THROWS_AS(fit_zipf(padded, true), std::invalid_argument);
}

TEST_CASE("complexity histogram of the Jacobi fixture") {
    CorpusIndex index = tu::build_corpus({{"d", {tu::as_tree(tu::jacobi_tree())}}});
    auto hist = complexity_histogram(index);
    REQUIRE(hist.size() == 4);
    CHECK(hist.at(1).unique_count == 5);
    CHECK(hist.at(2).unique_count == 2);
    CHECK(hist.at(3).unique_count == 1);
    CHECK(hist.at(4).unique_count == 1);
    CHECK(hist.at(1).unique_ratio == doctest::Approx(5.0 / 9.0));
    uint64_t total_unique = 0, total_occurrences = 0;
    for (const auto& [c, b] : hist) {
        total_unique += b.unique_count;
        total_occurrences += b.occurrence_count;
    }
    CHECK(total_unique == index.stats.n_unique);
    CHECK(total_occurrences == index.stats.n_occurrences);

    CHECK(complexity_histogram(CorpusIndex{}).empty());
}

TEST_CASE("csv exports") {
    namespace fs = std::filesystem;
    CorpusIndex index = counted_corpus();
    RankTable table = rank_table(index);

    fs::path rank_path = fs::temp_directory_path() / "moi_rank.csv";
    export_rank_csv(table, rank_path.string());
    {
        std::ifstream in(rank_path);
        std::string header, first;
        std::getline(in, header);
        std::getline(in, first);
        CHECK(header == "rank,key,frequency");
        CHECK(first == "1,\"mi:x\",5");
    }

    std::vector<double> freqs = model_frequencies(1000.0, 1.0, 2.7, 50);
    ZipfFit fit = fit_zipf(freqs, true);
    export_rank_csv(table, rank_path.string(), &fit);
    {
        std::ifstream in(rank_path);
        std::string header;
        std::getline(in, header);
        CHECK(header == "rank,key,frequency,zipf_model");
    }

    fs::path hist_path = fs::temp_directory_path() / "moi_hist.csv";
    export_histogram_csv(complexity_histogram(index), hist_path.string());
    {
        std::ifstream in(hist_path);
        std::string header, row;
        std::getline(in, header);
        std::getline(in, row);
        CHECK(header == "complexity,unique,occurrences,ratio");
        CHECK(row == "1,3,9,1");
    }
    fs::remove(rank_path);
    fs::remove(hist_path);
}
