#include "moi/json_out.hpp"

#include "moi/serialize.hpp"

namespace moi {

nlohmann::ordered_json stats_json(const CorpusIndex& index) {
    const CorpusStats& s = index.stats;
    nlohmann::ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["documents"] = s.n_documents;
    j["formulae"] = s.n_formulae;
    j["subexpressions"] = s.n_occurrences;
    j["unique_subexpressions"] = s.n_unique;
    j["avg_document_length"] = s.avg_doc_length;
    j["avg_complexity"] = s.avg_complexity;
    j["max_complexity"] = s.max_complexity;
    j["shard"] = index.shard_label;
    return j;
}

nlohmann::ordered_json zipf_json(const ZipfFit& fit, std::optional<uint32_t> complexity,
                                 bool shifted, size_t n_points) {
    nlohmann::ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["model"] = shifted ? "shifted" : "plain";
    if (complexity) {
        j["complexity"] = *complexity;
    } else {
        j["complexity"] = nullptr;
    }
    j["points"] = n_points;
    j["alpha"] = fit.alpha;
    j["beta"] = fit.beta;
    j["c"] = fit.c;
    j["fit_error"] = fit.fit_error;
    return j;
}

nlohmann::ordered_json search_json(std::string_view query, const RetrievalResult& result,
                                   size_t limit, const FacetCounts* facets) {
    nlohmann::ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["query"] = std::string(query);
    j["documents_retrieved"] = result.documents.size();
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    size_t n = 0;
    for (const RankedMoi& row : result.mois) {
        if (n++ >= limit) break;
        nlohmann::ordered_json r;
        r["key"] = row.scored.key;
        r["display"] = display_from_key(row.scored.key);
        r["score"] = row.scored.score;
        r["tfidf"] = row.tfidf;
        r["df"] = row.scored.df;
        r["total_tf"] = row.scored.total_tf;
        r["best_doc"] = row.scored.best_doc;
        r["hit_count"] = row.scored.hit_count;
        rows.push_back(std::move(r));
    }
    j["results"] = std::move(rows);
    if (facets) {
        nlohmann::ordered_json f = nlohmann::ordered_json::object();
        for (const auto& [complexity, entries] : *facets) {
            nlohmann::ordered_json list = nlohmann::ordered_json::array();
            for (const FacetEntry& e : entries) {
                list.push_back({{"key", e.key}, {"count", e.count}});
            }
            f[std::to_string(complexity)] = std::move(list);
        }
        j["facets"] = std::move(f);
    }
    return j;
}

nlohmann::ordered_json complete_json(std::string_view pattern, std::string_view mode,
                                     const std::vector<Suggestion>& suggestions) {
    nlohmann::ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["pattern"] = std::string(pattern);
    j["mode"] = std::string(mode);
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const Suggestion& s : suggestions) {
        nlohmann::ordered_json r;
        r["key"] = s.key;
        r["display"] = s.display;
        r["tf"] = s.tf;
        r["df"] = s.df;
        rows.push_back(std::move(r));
    }
    j["suggestions"] = std::move(rows);
    return j;
}

nlohmann::ordered_json moi_json(const MoiRecord& record) {
    nlohmann::ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["key"] = record.key;
    j["display"] = display_from_key(record.key);
    j["complexity"] = record.complexity;
    j["total_tf"] = record.total_tf;
    j["df"] = record.df;
    return j;
}

nlohmann::ordered_json error_json(std::string_view message) {
    nlohmann::ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["error"] = std::string(message);
    return j;
}

std::string to_wire(const nlohmann::ordered_json& j) {
    return j.dump() + "\n";
}

}  // namespace moi
