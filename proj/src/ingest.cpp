#include "moi/ingest.hpp"

#include <atomic>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "moi/errors.hpp"

namespace moi {

namespace {

struct ProcessedDoc {
    bool ok = false;
    std::string error;
    std::string id;
    std::string text;
    uint64_t formulae_seen = 0;
    std::vector<MathTree> kept;
    std::map<std::string, uint64_t> reject_reasons;
    std::map<std::string, uint64_t> foreign_tag_counts;
};

ProcessedDoc process_line(const std::string& line) {
    ProcessedDoc doc;
    nlohmann::json parsed = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (parsed.is_discarded() || !parsed.is_object()) {
        doc.error = "malformed JSON document line";
        return doc;
    }
    if (!parsed.contains("id") || !parsed["id"].is_string()) {
        doc.error = "document line missing string \"id\"";
        return doc;
    }
    doc.id = parsed["id"].get<std::string>();
    if (parsed.contains("text") && parsed["text"].is_string()) {
        doc.text = parsed["text"].get<std::string>();
    }
    if (parsed.contains("formulae")) {
        if (!parsed["formulae"].is_array()) {
            doc.error = "\"formulae\" must be an array";
            return doc;
        }
        for (const auto& item : parsed["formulae"]) {
            if (!item.is_string()) {
                doc.error = "formula entries must be strings";
                return doc;
            }
            ++doc.formulae_seen;
            try {
                MathTree tree = parse_mathml(item.get<std::string>());
                FilterVerdict verdict = filter_formula(tree);
                for (const std::string& tag : tree.foreign_tags) {
                    ++doc.foreign_tag_counts[tag];
                }
                if (!verdict.keep) {
                    ++doc.reject_reasons[std::string(reject_reason_name(*verdict.reason))];
                    continue;
                }
                doc.kept.push_back(normalize_invisible_operators(std::move(tree)));
            } catch (const std::exception& e) {
                ++doc.reject_reasons["parse-error"];
            }
        }
    }
    doc.ok = true;
    return doc;
}

}  // namespace

IngestOutput ingest_corpus(std::istream& in, const IngestOptions& options) {
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        bool blank = line.find_first_not_of(" \t") == std::string::npos;
        if (!blank) lines.push_back(std::move(line));
    }

    std::vector<ProcessedDoc> processed(lines.size());
    unsigned workers = std::max(1u, options.workers);
    if (workers == 1 || lines.size() < 2) {
        for (size_t i = 0; i < lines.size(); ++i) processed[i] = process_line(lines[i]);
    } else {
        std::atomic<size_t> next{0};
        auto run = [&] {
            for (size_t i = next.fetch_add(1); i < lines.size(); i = next.fetch_add(1)) {
                processed[i] = process_line(lines[i]);
            }
        };
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
        for (auto& t : pool) t.join();
    }

    IngestOutput out;
    IngestReport& report = out.report;
    CorpusIndexBuilder builder(options.shard_label);
    for (size_t i = 0; i < processed.size(); ++i) {
        ProcessedDoc& doc = processed[i];
        report.formulae_seen += doc.formulae_seen;
        for (const auto& [reason, count] : doc.reject_reasons) {
            report.reject_reasons[reason] += count;
            report.formulae_rejected += count;
        }
        for (const auto& [tag, count] : doc.foreign_tag_counts) {
            report.foreign_tag_counts[tag] += count;
        }
        if (!doc.ok) {
            if (options.strict) {
                throw IngestError("line " + std::to_string(i + 1) + ": " + doc.error);
            }
            ++report.documents_skipped;
            report.messages.push_back("skipped line " + std::to_string(i + 1) + ": " + doc.error);
            continue;
        }
        if (options.strict && !doc.reject_reasons.empty() &&
            doc.reject_reasons.contains("parse-error")) {
            throw IngestError("line " + std::to_string(i + 1) + ": formula parse failure in '" +
                              doc.id + "'");
        }
        try {
            builder.add(ingest_document(doc.id, doc.kept));
        } catch (const DuplicateDocumentError& e) {
            if (options.strict) throw;
            ++report.documents_skipped;
            report.messages.push_back(std::string("skipped duplicate document: ") + doc.id);
            continue;
        }
        report.formulae_kept += doc.kept.size();
        ++report.documents;
        if (options.with_text_index) out.text.add_document(doc.id, doc.text);
    }
    out.corpus = builder.finish();
    return out;
}

IngestOutput ingest_corpus_file(const std::string& path, const IngestOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(IoErrorKind::open_failed, "cannot open corpus: " + path);
    return ingest_corpus(in, options);
}

}  // namespace moi
