#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "moi/distribution.hpp"
#include "moi/index.hpp"
#include "moi/retrieval.hpp"

namespace moi {

// The one producer of response JSON: the CLI and the HTTP service both go
// through these so identical queries yield byte-identical bodies. Keys are
// emitted in a fixed order. Bump kSchemaVersion on breaking changes.
inline constexpr int kSchemaVersion = 1;

nlohmann::ordered_json stats_json(const CorpusIndex& index);

nlohmann::ordered_json zipf_json(const ZipfFit& fit, std::optional<uint32_t> complexity,
                                 bool shifted, size_t n_points);

nlohmann::ordered_json search_json(std::string_view query, const RetrievalResult& result,
                                   size_t limit, const FacetCounts* facets);

nlohmann::ordered_json complete_json(std::string_view pattern, std::string_view mode,
                                     const std::vector<Suggestion>& suggestions);

nlohmann::ordered_json moi_json(const MoiRecord& record);

nlohmann::ordered_json error_json(std::string_view message);

// Compact dump with a trailing newline; the wire and stdout format.
std::string to_wire(const nlohmann::ordered_json& j);

}  // namespace moi
