// moi — build, inspect, and query subexpression indexes over MathML corpora.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "moi/distribution.hpp"
#include "moi/errors.hpp"
#include "moi/index.hpp"
#include "moi/ingest.hpp"
#include "moi/json_out.hpp"
#include "moi/retrieval.hpp"
#include "moi/serialize.hpp"
#include "moi/service.hpp"
#include "moi/text_index.hpp"

namespace {

// Exit codes (documented in README.md; keep in sync).
constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitIo = 3;
constexpr int kExitCorpusParse = 4;
constexpr int kExitAllFiltered = 5;
constexpr int kExitEmptyQuery = 6;
constexpr int kExitBadPattern = 7;
constexpr int kExitUnknownKey = 8;

enum class Format { table, json, tsv };

struct CommonOptions {
    std::string index_path;
    Format format = Format::table;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--index", opts.index_path, "Index file path")
        ->envname("MOI_INDEX_PATH");
    std::map<std::string, Format> formats{
        {"table", Format::table}, {"json", Format::json}, {"tsv", Format::tsv}};
    cmd->add_option("--format", opts.format, "Output format")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
}

std::string require_index_path(const CommonOptions& opts) {
    if (opts.index_path.empty()) {
        throw CLI::ValidationError("--index is required (or set MOI_INDEX_PATH)");
    }
    return opts.index_path;
}

std::string text_index_path(const std::string& index_path) {
    return index_path + ".text";
}

void print_stats_table(const moi::CorpusIndex& index) {
    const moi::CorpusStats& s = index.stats;
    std::printf("%-26s %s\n", "Category", index.shard_label.empty()
                                              ? "Value"
                                              : index.shard_label.c_str());
    std::printf("%-26s %llu\n", "Documents", (unsigned long long)s.n_documents);
    std::printf("%-26s %llu\n", "Formulae", (unsigned long long)s.n_formulae);
    std::printf("%-26s %llu\n", "Subexpressions", (unsigned long long)s.n_occurrences);
    std::printf("%-26s %llu\n", "Unique Subexpressions", (unsigned long long)s.n_unique);
    std::printf("%-26s %s\n", "Average Document Length",
                moi::format_real(s.avg_doc_length).c_str());
    std::printf("%-26s %s\n", "Average Complexity", moi::format_real(s.avg_complexity).c_str());
    std::printf("%-26s %u\n", "Maximum Complexity", s.max_complexity);
}

void emit(const nlohmann::ordered_json& j) {
    std::string wire = moi::to_wire(j);
    std::fwrite(wire.data(), 1, wire.size(), stdout);
}

// ---- ingest ----

struct IngestArgs {
    std::string corpus_path;
    CommonOptions common;
    unsigned workers = 1;
    bool strict = false;
    bool no_text = false;
    std::string shard_label;
};

int cmd_ingest(const IngestArgs& args) {
    moi::IngestOptions options;
    options.workers = args.workers;
    options.strict = args.strict;
    options.shard_label = args.shard_label;
    options.with_text_index = !args.no_text;

    moi::IngestOutput out;
    try {
        out = moi::ingest_corpus_file(args.corpus_path, options);
    } catch (const moi::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const moi::IngestError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCorpusParse;
    }

    const std::string index_path = require_index_path(args.common);
    moi::save_index(out.corpus, index_path);
    if (options.with_text_index) out.text.save(text_index_path(index_path));

    for (const std::string& msg : out.report.messages) std::cerr << msg << "\n";
    if (!out.report.foreign_tag_counts.empty()) {
        std::cerr << "stripped foreign tags:";
        for (const auto& [tag, count] : out.report.foreign_tag_counts) {
            std::cerr << ' ' << tag << '=' << count;
        }
        std::cerr << "\n";
    }
    if (out.report.formulae_rejected > 0) {
        std::cerr << "rejected " << out.report.formulae_rejected << " of "
                  << out.report.formulae_seen << " formulae:";
        for (const auto& [reason, count] : out.report.reject_reasons) {
            std::cerr << ' ' << reason << '=' << count;
        }
        std::cerr << "\n";
    }

    if (args.common.format == Format::json) {
        emit(moi::stats_json(out.corpus));
    } else {
        print_stats_table(out.corpus);
    }
    if (out.report.formulae_seen > 0 && out.report.formulae_kept == 0) {
        std::cerr << "error: every formula in the corpus was filtered out\n";
        return kExitAllFiltered;
    }
    return kExitOk;
}

// ---- merge ----

int cmd_merge(const CommonOptions& common, const std::vector<std::string>& shard_paths) {
    std::vector<moi::CorpusIndex> shards;
    shards.reserve(shard_paths.size());
    for (const std::string& path : shard_paths) shards.push_back(moi::load_index(path));
    moi::CorpusIndex merged = moi::merge_shards(shards);
    moi::save_index(merged, require_index_path(common));
    if (common.format == Format::json) {
        emit(moi::stats_json(merged));
    } else {
        print_stats_table(merged);
    }
    return kExitOk;
}

// ---- stats ----

int cmd_stats(const CommonOptions& common) {
    moi::CorpusIndex index = moi::load_index(require_index_path(common));
    switch (common.format) {
        case Format::json:
            emit(moi::stats_json(index));
            break;
        case Format::tsv:
            std::printf("documents\tformulae\tsubexpressions\tunique\tavg_doc_length\t"
                        "avg_complexity\tmax_complexity\n");
            std::printf("%llu\t%llu\t%llu\t%llu\t%s\t%s\t%u\n",
                        (unsigned long long)index.stats.n_documents,
                        (unsigned long long)index.stats.n_formulae,
                        (unsigned long long)index.stats.n_occurrences,
                        (unsigned long long)index.stats.n_unique,
                        moi::format_real(index.stats.avg_doc_length).c_str(),
                        moi::format_real(index.stats.avg_complexity).c_str(),
                        index.stats.max_complexity);
            break;
        case Format::table:
            print_stats_table(index);
            break;
    }
    return kExitOk;
}

// ---- histogram ----

int cmd_histogram(const CommonOptions& common, const std::string& csv_path) {
    moi::CorpusIndex index = moi::load_index(require_index_path(common));
    auto hist = moi::complexity_histogram(index);
    if (hist.empty()) std::cerr << "warning: index is empty\n";
    if (!csv_path.empty()) moi::export_histogram_csv(hist, csv_path);
    if (common.format == Format::json) {
        nlohmann::ordered_json j;
        j["schema_version"] = moi::kSchemaVersion;
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (const auto& [c, b] : hist) {
            rows.push_back({{"complexity", c},
                            {"unique", b.unique_count},
                            {"occurrences", b.occurrence_count},
                            {"ratio", b.unique_ratio}});
        }
        j["histogram"] = std::move(rows);
        emit(j);
    } else {
        std::printf("complexity\tunique\toccurrences\tratio\n");
        for (const auto& [c, b] : hist) {
            std::printf("%u\t%llu\t%llu\t%s\n", c, (unsigned long long)b.unique_count,
                        (unsigned long long)b.occurrence_count,
                        moi::format_real(b.unique_ratio).c_str());
        }
    }
    return kExitOk;
}

// ---- zipf ----

struct ZipfArgs {
    CommonOptions common;
    std::optional<uint32_t> complexity;
    bool unshifted = false;
    std::string csv_path;
    std::string per_complexity_dir;
    uint32_t max_complexity = 5;
};

int cmd_zipf(const ZipfArgs& args) {
    moi::CorpusIndex index = moi::load_index(require_index_path(args.common));

    if (!args.per_complexity_dir.empty()) {
        std::filesystem::create_directories(args.per_complexity_dir);
        for (uint32_t c = 1; c <= args.max_complexity; ++c) {
            moi::RankTable table = moi::rank_table(index, c);
            std::string path = args.per_complexity_dir + "/rank_c" + std::to_string(c) + ".csv";
            try {
                moi::ZipfFit fit = moi::fit_zipf(table, !args.unshifted);
                moi::export_rank_csv(table, path, &fit);
                std::printf("C%u: alpha=%s beta=%s fit_error=%s points=%zu\n", c,
                            moi::format_real(fit.alpha).c_str(),
                            moi::format_real(fit.beta).c_str(),
                            moi::format_real(fit.fit_error).c_str(), table.entries.size());
            } catch (const std::invalid_argument&) {
                moi::export_rank_csv(table, path, nullptr);
                std::cerr << "warning: C" << c << " has too few points for a fit\n";
            }
        }
        return kExitOk;
    }

    moi::RankTable table = moi::rank_table(index, args.complexity);
    moi::ZipfFit fit;
    try {
        fit = moi::fit_zipf(table, !args.unshifted);
    } catch (const std::invalid_argument& e) {
        if (!args.csv_path.empty()) moi::export_rank_csv(table, args.csv_path, nullptr);
        std::cerr << "warning: " << e.what() << "\n";
        return kExitOk;
    }
    if (!args.csv_path.empty()) moi::export_rank_csv(table, args.csv_path, &fit);
    if (args.common.format == Format::json) {
        emit(moi::zipf_json(fit, args.complexity, !args.unshifted, table.entries.size()));
    } else {
        std::printf("alpha=%s beta=%s c=%s fit_error=%s points=%zu\n",
                    moi::format_real(fit.alpha).c_str(), moi::format_real(fit.beta).c_str(),
                    moi::format_real(fit.c).c_str(), moi::format_real(fit.fit_error).c_str(),
                    table.entries.size());
    }
    return kExitOk;
}

// ---- search ----

struct SearchArgs {
    CommonOptions common;
    std::string query;
    moi::RankingParams params;
    moi::RetrievalSettings settings;
    std::string log_base = "e";
    size_t limit = 20;
    bool facets = false;
};

int cmd_search(const SearchArgs& args) {
    moi::RankingParams params = args.params;
    if (args.log_base == "2") params.log_base = moi::LogBase::base2;
    else if (args.log_base == "10") params.log_base = moi::LogBase::base10;
    args.settings.validate();

    const std::string index_path = require_index_path(args.common);
    moi::CorpusIndex index = moi::load_index(index_path);
    moi::text::TextIndex text = moi::text::TextIndex::load(text_index_path(index_path));

    moi::RetrievalResult result = moi::run_query(args.query, args.settings, index, text, params);
    std::optional<moi::FacetCounts> facets;
    if (args.facets) facets = moi::facet_counts(args.query, args.settings, index, text);

    switch (args.common.format) {
        case Format::json:
            emit(moi::search_json(args.query, result, args.limit, facets ? &*facets : nullptr));
            break;
        case Format::tsv: {
            std::printf("rank\tscore\ttfidf\tdf\ttotal_tf\thits\tbest_doc\tkey\n");
            size_t n = 0;
            for (const moi::RankedMoi& row : result.mois) {
                if (n >= args.limit) break;
                std::printf("%zu\t%s\t%s\t%llu\t%llu\t%llu\t%s\t%s\n", ++n,
                            moi::format_real(row.scored.score).c_str(),
                            moi::format_real(row.tfidf).c_str(),
                            (unsigned long long)row.scored.df,
                            (unsigned long long)row.scored.total_tf,
                            (unsigned long long)row.scored.hit_count,
                            row.scored.best_doc.c_str(), row.scored.key.c_str());
            }
            break;
        }
        case Format::table: {
            std::printf("retrieved %zu documents for \"%s\"\n", result.documents.size(),
                        args.query.c_str());
            std::printf("%4s  %10s  %10s  %6s  %8s  %5s  %s\n", "rank", "mBM25", "tfidf", "df",
                        "tf", "hits", "expression");
            size_t n = 0;
            for (const moi::RankedMoi& row : result.mois) {
                if (n >= args.limit) break;
                std::printf("%4zu  %10s  %10s  %6llu  %8llu  %5llu  %s\n", ++n,
                            moi::format_real(row.scored.score).c_str(),
                            moi::format_real(row.tfidf).c_str(),
                            (unsigned long long)row.scored.df,
                            (unsigned long long)row.scored.total_tf,
                            (unsigned long long)row.scored.hit_count,
                            moi::display_from_key(row.scored.key).c_str());
            }
            if (facets) {
                for (const auto& [c, entries] : *facets) {
                    std::printf("C%u:", c);
                    for (const moi::FacetEntry& e : entries) {
                        std::printf("  %s (%llu)", moi::display_from_key(e.key).c_str(),
                                    (unsigned long long)e.count);
                    }
                    std::printf("\n");
                }
            }
            break;
        }
    }
    return kExitOk;
}

// ---- complete ----

struct CompleteArgs {
    CommonOptions common;
    std::string pattern;
    std::string mode = "prefix";
    std::vector<std::string> symbols;
    size_t limit = 10;
};

int cmd_complete(const CompleteArgs& args) {
    moi::CorpusIndex index = moi::load_index(require_index_path(args.common));
    std::vector<moi::Suggestion> suggestions;
    if (args.mode == "prefix") {
        suggestions = moi::autocomplete(args.pattern, args.limit, index);
    } else {
        std::set<std::string> symbols(args.symbols.begin(), args.symbols.end());
        suggestions = moi::suggest_containing(args.pattern, symbols, args.limit, index);
    }
    switch (args.common.format) {
        case Format::json:
            emit(moi::complete_json(args.pattern, args.mode, suggestions));
            break;
        case Format::tsv:
            std::printf("tf\tdf\tkey\n");
            for (const moi::Suggestion& s : suggestions) {
                std::printf("%llu\t%llu\t%s\n", (unsigned long long)s.tf,
                            (unsigned long long)s.df, s.key.c_str());
            }
            break;
        case Format::table:
            std::printf("%8s  %8s  %s\n", "TF", "DF", "suggestion");
            for (const moi::Suggestion& s : suggestions) {
                std::printf("%8llu  %8llu  %s\n", (unsigned long long)s.tf,
                            (unsigned long long)s.df, s.display.c_str());
            }
            break;
    }
    return kExitOk;
}

// ---- lookup ----

int cmd_lookup(const CommonOptions& common, const std::string& key) {
    moi::CorpusIndex index = moi::load_index(require_index_path(common));
    auto it = index.records.find(key);
    if (it == index.records.end()) {
        std::cerr << "error: unknown key: " << key << "\n";
        return kExitUnknownKey;
    }
    if (common.format == Format::json) {
        emit(moi::moi_json(it->second));
    } else {
        std::printf("key         %s\n", it->second.key.c_str());
        std::printf("display     %s\n", moi::display_from_key(it->second.key).c_str());
        std::printf("complexity  %u\n", it->second.complexity);
        std::printf("total_tf    %llu\n", (unsigned long long)it->second.total_tf);
        std::printf("df          %llu\n", (unsigned long long)it->second.df);
    }
    return kExitOk;
}

// ---- export ----

int cmd_export(const CommonOptions& common, const std::string& tsv_path) {
    moi::CorpusIndex index = moi::load_index(require_index_path(common));
    moi::export_records_tsv(index, tsv_path);
    std::printf("wrote %zu records to %s\n", index.records.size(), tsv_path.c_str());
    return kExitOk;
}

// ---- serve ----

int cmd_serve(const CommonOptions& common, const std::string& bind,
              const moi::RankingParams& params, const moi::RetrievalSettings& settings) {
    std::string host = "127.0.0.1";
    int port = 8080;
    if (size_t colon = bind.rfind(':'); colon != std::string::npos) {
        host = bind.substr(0, colon);
        port = std::stoi(bind.substr(colon + 1));
    } else if (!bind.empty()) {
        host = bind;
    }

    const std::string index_path = require_index_path(common);
    moi::Service service(params, settings);
    int bound = service.start(host, port);
    if (bound < 0) {
        std::cerr << "error: cannot bind " << host << ":" << port << "\n";
        return kExitIo;
    }
    std::fprintf(stderr, "listening on %s:%d\n", host.c_str(), bound);

    moi::CorpusIndex index = moi::load_index(index_path);
    moi::text::TextIndex text;
    try {
        text = moi::text::TextIndex::load(text_index_path(index_path));
    } catch (const moi::IoError&) {
        std::fprintf(stderr, "note: no text index beside %s; /search disabled-ish\n",
                     index_path.c_str());
    }
    service.provide(std::move(index), std::move(text));
    std::fprintf(stderr, "index ready\n");
    service.wait();
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mathematical-object index and retrieval engine"};
    app.require_subcommand(1);

    IngestArgs ingest_args;
    CLI::App* ingest = app.add_subcommand("ingest", "Build an index from a JSON-lines corpus");
    ingest->add_option("--corpus", ingest_args.corpus_path, "Corpus JSONL path")->required();
    add_common(ingest, ingest_args.common);
    ingest->add_option("--workers", ingest_args.workers, "Parallel ingest workers")
        ->check(CLI::Range(1u, 256u));
    ingest->add_flag("--strict", ingest_args.strict, "Abort on malformed documents");
    ingest->add_flag("--no-text", ingest_args.no_text, "Skip the text index");
    ingest->add_option("--shard-label", ingest_args.shard_label, "Label stored in the index");

    CommonOptions merge_common;
    std::vector<std::string> merge_inputs;
    CLI::App* merge = app.add_subcommand("merge", "Merge shard indexes");
    add_common(merge, merge_common);
    merge->add_option("shards", merge_inputs, "Shard index files")->required()->expected(-1);

    CommonOptions stats_common;
    CLI::App* stats = app.add_subcommand("stats", "Print corpus statistics");
    add_common(stats, stats_common);

    CommonOptions hist_common;
    std::string hist_csv;
    CLI::App* histogram = app.add_subcommand("histogram", "Per-complexity distribution");
    add_common(histogram, hist_common);
    histogram->add_option("--csv", hist_csv, "Write CSV to this path");

    ZipfArgs zipf_args;
    uint32_t zipf_complexity = 0;
    CLI::App* zipf = app.add_subcommand("zipf", "Fit the rank-frequency power law");
    add_common(zipf, zipf_args.common);
    CLI::Option* zc = zipf->add_option("--complexity", zipf_complexity,
                                       "Restrict to one complexity class");
    zipf->add_flag("--unshifted", zipf_args.unshifted, "Fit without the rank shift");
    zipf->add_option("--csv", zipf_args.csv_path, "Write the rank table with the model column");
    zipf->add_option("--per-complexity", zipf_args.per_complexity_dir,
                     "Write one rank CSV per complexity class into this directory");
    zipf->add_option("--max-complexity", zipf_args.max_complexity,
                     "Highest class for --per-complexity");

    SearchArgs search_args;
    CLI::App* search = app.add_subcommand("search", "Rank expressions for a text query");
    search->add_option("query", search_args.query, "Text query")->required();
    add_common(search, search_args.common);
    search->add_option("--k", search_args.params.k, "TF influence")->check(CLI::NonNegativeNumber);
    search->add_option("--b", search_args.params.b, "Length normalization influence")
        ->check(CLI::Range(0.0, 1.0));
    search->add_option("--log-base", search_args.log_base, "Logarithm base: e, 2 or 10")
        ->check(CLI::IsMember({"e", "2", "10"}));
    search->add_option("--retrieved-docs", search_args.settings.retrieved_docs,
                       "Documents to retrieve");
    search->add_option("--min-hit-freq", search_args.settings.min_hit_freq,
                       "Minimum retrieved documents containing the expression");
    search->add_option("--min-df", search_args.settings.min_df, "Minimum corpus DF");
    search->add_option("--max-df", search_args.settings.max_df, "Maximum corpus DF");
    search->add_option("--min-complexity", search_args.settings.min_complexity,
                       "Minimum complexity");
    search->add_option("--limit", search_args.limit, "Rows to print");
    search->add_flag("--facets", search_args.facets, "Include per-complexity frequency facets");

    CompleteArgs complete_args;
    CLI::App* complete = app.add_subcommand("complete", "Suggest completions for a pattern");
    complete->add_option("pattern", complete_args.pattern, "Partial expression, e.g. \"E = m\"")
        ->required();
    add_common(complete, complete_args.common);
    complete->add_option("--mode", complete_args.mode, "prefix or contains")
        ->check(CLI::IsMember({"prefix", "contains"}));
    complete->add_option("--symbols", complete_args.symbols,
                         "Identifiers the right-hand side must contain (contains mode)")
        ->delimiter(',');
    complete->add_option("--limit", complete_args.limit, "Suggestions to return");

    CommonOptions lookup_common;
    std::string lookup_key;
    CLI::App* lookup = app.add_subcommand("lookup", "Show the record for a canonical key");
    lookup->add_option("key", lookup_key, "Canonical key")->required();
    add_common(lookup, lookup_common);

    CommonOptions export_common;
    std::string export_tsv;
    CLI::App* exporter = app.add_subcommand("export", "Export records as TSV");
    add_common(exporter, export_common);
    exporter->add_option("--tsv", export_tsv, "Output TSV path")->required();

    CommonOptions serve_common;
    std::string serve_bind = "127.0.0.1:8080";
    moi::RankingParams serve_params;
    moi::RetrievalSettings serve_settings;
    CLI::App* serve = app.add_subcommand("serve", "Run the JSON query service");
    add_common(serve, serve_common);
    serve->add_option("--bind", serve_bind, "host:port");
    serve->add_option("--k", serve_params.k, "Default TF influence");
    serve->add_option("--b", serve_params.b, "Default length normalization influence");
    serve->add_option("--retrieved-docs", serve_settings.retrieved_docs, "Default |D_q|");
    serve->add_option("--min-hit-freq", serve_settings.min_hit_freq, "Default hit frequency");
    serve->add_option("--min-df", serve_settings.min_df, "Default minimum DF");
    serve->add_option("--max-df", serve_settings.max_df, "Default maximum DF");
    serve->add_option("--min-complexity", serve_settings.min_complexity,
                      "Default minimum complexity");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*ingest) return cmd_ingest(ingest_args);
        if (*merge) return cmd_merge(merge_common, merge_inputs);
        if (*stats) return cmd_stats(stats_common);
        if (*histogram) return cmd_histogram(hist_common, hist_csv);
        if (*zipf) {
            if (*zc) zipf_args.complexity = zipf_complexity;
            return cmd_zipf(zipf_args);
        }
        if (*search) return cmd_search(search_args);
        if (*complete) return cmd_complete(complete_args);
        if (*lookup) return cmd_lookup(lookup_common, lookup_key);
        if (*exporter) return cmd_export(export_common, export_tsv);
        if (*serve) return cmd_serve(serve_common, serve_bind, serve_params, serve_settings);
    } catch (const moi::EmptyQueryError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitEmptyQuery;
    } catch (const moi::PatternError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadPattern;
    } catch (const moi::DecodeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadPattern;
    } catch (const moi::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitOk;
}
