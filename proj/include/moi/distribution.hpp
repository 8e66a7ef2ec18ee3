#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "moi/index.hpp"

namespace moi {

struct RankEntry {
    uint64_t rank = 0;  // 1-based, consecutive
    MoiKey key;
    uint64_t frequency = 0;

    bool operator==(const RankEntry&) const = default;
};

// Records ordered by corpus frequency (descending; ties break on key bytes).
struct RankTable {
    std::vector<RankEntry> entries;
    std::optional<uint32_t> complexity_filter;
};

struct ZipfFit {
    double alpha = 0.0;
    double beta = 0.0;   // 0 for the unshifted model
    double c = 0.0;      // proportionality constant
    double fit_error = 0.0;  // RMS residual in log-log space

    double model(double rank) const;
};

RankTable rank_table(const CorpusIndex& index, std::optional<uint32_t> complexity_filter = {},
                     std::optional<uint64_t> min_df = {});

// Least squares of log f against log(r + beta): alpha and log c are solved in
// closed form per candidate beta, and beta is found by golden-section search
// over [0, r_max/2]. Requires at least three positive-frequency points;
// throws std::invalid_argument otherwise.
ZipfFit fit_zipf(std::span<const double> frequencies_by_rank, bool shifted);
ZipfFit fit_zipf(const RankTable& table, bool shifted);

struct ComplexityBucket {
    uint64_t unique_count = 0;
    uint64_t occurrence_count = 0;
    double unique_ratio = 0.0;  // share of all unique keys

    bool operator==(const ComplexityBucket&) const = default;
};

std::map<uint32_t, ComplexityBucket> complexity_histogram(const CorpusIndex& index);

// CSV exports. Headers: "rank,key,frequency[,zipf_model]" and
// "complexity,unique,occurrences,ratio". Reals carry 6 significant digits.
void export_rank_csv(const RankTable& table, const std::string& path,
                     const ZipfFit* fit = nullptr);
void export_histogram_csv(const std::map<uint32_t, ComplexityBucket>& histogram,
                          const std::string& path);

std::string format_real(double v);  // 6 significant digits

}  // namespace moi
