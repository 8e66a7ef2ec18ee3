#include "moi/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "moi/errors.hpp"

namespace moi {

namespace {

struct LsqResult {
    double sse = 0.0;
    double alpha = 0.0;
    double log_c = 0.0;
    size_t n = 0;
};

LsqResult least_squares(std::span<const double> freqs, double beta) {
    LsqResult r;
    double sum_x = 0.0, sum_y = 0.0;
    for (size_t i = 0; i < freqs.size(); ++i) {
        if (freqs[i] <= 0.0) continue;
        sum_x += std::log(static_cast<double>(i + 1) + beta);
        sum_y += std::log(freqs[i]);
        ++r.n;
    }
    if (r.n == 0) return r;
    double mean_x = sum_x / static_cast<double>(r.n);
    double mean_y = sum_y / static_cast<double>(r.n);
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < freqs.size(); ++i) {
        if (freqs[i] <= 0.0) continue;
        double dx = std::log(static_cast<double>(i + 1) + beta) - mean_x;
        double dy = std::log(freqs[i]) - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
    }
    double slope = sxx > 0.0 ? sxy / sxx : 0.0;
    r.alpha = -slope;
    r.log_c = mean_y - slope * mean_x;
    for (size_t i = 0; i < freqs.size(); ++i) {
        if (freqs[i] <= 0.0) continue;
        double x = std::log(static_cast<double>(i + 1) + beta);
        double resid = std::log(freqs[i]) - (r.log_c + slope * x);
        r.sse += resid * resid;
    }
    return r;
}

}  // namespace

double ZipfFit::model(double rank) const {
    return c / std::pow(rank + beta, alpha);
}

RankTable rank_table(const CorpusIndex& index, std::optional<uint32_t> complexity_filter,
                     std::optional<uint64_t> min_df) {
    RankTable table;
    table.complexity_filter = complexity_filter;
    for (const auto& [key, rec] : index.records) {
        if (complexity_filter && rec.complexity != *complexity_filter) continue;
        if (min_df && rec.df < *min_df) continue;
        table.entries.push_back({0, key, rec.total_tf});
    }
    std::sort(table.entries.begin(), table.entries.end(),
              [](const RankEntry& a, const RankEntry& b) {
                  if (a.frequency != b.frequency) return a.frequency > b.frequency;
                  return a.key < b.key;
              });
    for (size_t i = 0; i < table.entries.size(); ++i) table.entries[i].rank = i + 1;
    return table;
}

ZipfFit fit_zipf(std::span<const double> frequencies_by_rank, bool shifted) {
    size_t positive = 0;
    for (double f : frequencies_by_rank) {
        if (f > 0.0) ++positive;
    }
    if (positive < 3) {
        throw std::invalid_argument("zipf fit needs at least 3 positive-frequency points");
    }

    double beta = 0.0;
    if (shifted) {
        double lo = 0.0;
        double hi = static_cast<double>(frequencies_by_rank.size()) / 2.0;
        constexpr double kGolden = 0.6180339887498949;
        double c1 = hi - kGolden * (hi - lo);
        double c2 = lo + kGolden * (hi - lo);
        double f1 = least_squares(frequencies_by_rank, c1).sse;
        double f2 = least_squares(frequencies_by_rank, c2).sse;
        for (int iter = 0; iter < 200 && hi - lo > 1e-10 * std::max(1.0, hi); ++iter) {
            if (f1 < f2) {
                hi = c2;
                c2 = c1;
                f2 = f1;
                c1 = hi - kGolden * (hi - lo);
                f1 = least_squares(frequencies_by_rank, c1).sse;
            } else {
                lo = c1;
                c1 = c2;
                f1 = f2;
                c2 = lo + kGolden * (hi - lo);
                f2 = least_squares(frequencies_by_rank, c2).sse;
            }
        }
        beta = (lo + hi) / 2.0;
    }

    LsqResult r = least_squares(frequencies_by_rank, beta);
    ZipfFit fit;
    fit.alpha = r.alpha;
    fit.beta = beta;
    fit.c = std::exp(r.log_c);
    fit.fit_error = std::sqrt(r.sse / static_cast<double>(r.n));
    return fit;
}

ZipfFit fit_zipf(const RankTable& table, bool shifted) {
    std::vector<double> freqs;
    freqs.reserve(table.entries.size());
    for (const RankEntry& e : table.entries) freqs.push_back(static_cast<double>(e.frequency));
    return fit_zipf(freqs, shifted);
}

std::map<uint32_t, ComplexityBucket> complexity_histogram(const CorpusIndex& index) {
    std::map<uint32_t, ComplexityBucket> hist;
    for (const auto& [key, rec] : index.records) {
        ComplexityBucket& b = hist[rec.complexity];
        b.unique_count += 1;
        b.occurrence_count += rec.total_tf;
    }
    if (!index.records.empty()) {
        double total = static_cast<double>(index.records.size());
        for (auto& [c, b] : hist) b.unique_ratio = static_cast<double>(b.unique_count) / total;
    }
    return hist;
}

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void export_rank_csv(const RankTable& table, const std::string& path, const ZipfFit* fit) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError(IoErrorKind::open_failed, "cannot open for writing: " + path);
    out << (fit ? "rank,key,frequency,zipf_model\n" : "rank,key,frequency\n");
    for (const RankEntry& e : table.entries) {
        std::string key = e.key;
        // RFC-4180 quoting: keys contain commas by construction.
        std::string quoted = "\"";
        for (char c : key) {
            if (c == '"') quoted += '"';
            quoted += c;
        }
        quoted += '"';
        out << e.rank << ',' << quoted << ',' << e.frequency;
        if (fit) out << ',' << format_real(fit->model(static_cast<double>(e.rank)));
        out << '\n';
    }
    if (!out) throw IoError(IoErrorKind::write_failed, "write failed: " + path);
}

void export_histogram_csv(const std::map<uint32_t, ComplexityBucket>& histogram,
                          const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError(IoErrorKind::open_failed, "cannot open for writing: " + path);
    out << "complexity,unique,occurrences,ratio\n";
    for (const auto& [c, b] : histogram) {
        out << c << ',' << b.unique_count << ',' << b.occurrence_count << ','
            << format_real(b.unique_ratio) << '\n';
    }
    if (!out) throw IoError(IoErrorKind::write_failed, "write failed: " + path);
}

}  // namespace moi
