#ifndef JREPACK_STATS_REPORTS_HPP
#define JREPACK_STATS_REPORTS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jrepack/coeff/buckets.hpp"
#include "jrepack/common.hpp"
#include "jrepack/jpeg/types.hpp"
#include "jrepack/model/laplace.hpp"
#include "jrepack/predict/predictor.hpp"
#include "jrepack/stats/rng.hpp"

namespace jrepack::stats {

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// Bucket-pair correlations

struct PairCorrelation {
    int k1 = 0, k2 = 0;
    std::optional<double> r;   // nullopt when a series is constant
    std::size_t n = 0;
    double bootstrap_stderr = 0.0;
};

struct CorrelationReport {
    int component = 0;
    std::vector<PairCorrelation> pairs;  // all k1 < k2, 2016 rows
};

inline CorrelationReport bucket_correlations(const jpeg::QuantizedImage& img, int component = 0,
                                             int bootstrap_draws = 32,
                                             std::uint64_t seed = 1) {
    const jpeg::BlockGrid& grid = img.components.at(static_cast<std::size_t>(component));
    const std::size_t n = grid.block_count();
    if (n < 2) throw InsufficientData("bucket_correlations: need at least 2 blocks");

    std::array<std::vector<double>, 64> series;
    for (int k = 0; k < 64; ++k) {
        coeff::BucketView view(grid, component, k);
        series[static_cast<std::size_t>(k)].resize(n);
        for (std::size_t i = 0; i < n; ++i)
            series[static_cast<std::size_t>(k)][i] = static_cast<double>(view[i]);
    }

    // one shared index resample per bootstrap draw (paired bootstrap)
    Rng rng(seed);
    std::vector<std::vector<std::size_t>> draws(static_cast<std::size_t>(std::max(bootstrap_draws, 0)));
    for (auto& d : draws) {
        d.resize(n);
        for (auto& idx : d) idx = rng.index(n);
    }

    CorrelationReport rep;
    rep.component = component;
    rep.pairs.reserve(64 * 63 / 2);
    std::vector<double> ra, rb;
    for (int k1 = 0; k1 < 64; ++k1) {
        for (int k2 = k1 + 1; k2 < 64; ++k2) {
            PairCorrelation pc;
            pc.k1 = k1;
            pc.k2 = k2;
            pc.n = n;
            pc.r = predict::pearson(series[static_cast<std::size_t>(k1)],
                                    series[static_cast<std::size_t>(k2)]);
            if (pc.r && !draws.empty()) {
                double sum = 0.0, sum2 = 0.0;
                std::size_t valid = 0;
                for (const auto& d : draws) {
                    ra.resize(n);
                    rb.resize(n);
                    for (std::size_t i = 0; i < n; ++i) {
                        ra[i] = series[static_cast<std::size_t>(k1)][d[i]];
                        rb[i] = series[static_cast<std::size_t>(k2)][d[i]];
                    }
                    const auto rr = predict::pearson(ra, rb);
                    if (rr) {
                        sum += *rr;
                        sum2 += *rr * *rr;
                        ++valid;
                    }
                }
                if (valid > 1) {
                    const double mean = sum / static_cast<double>(valid);
                    const double var =
                        std::max(0.0, sum2 / static_cast<double>(valid) - mean * mean);
                    pc.bootstrap_stderr = std::sqrt(var);
                }
            }
            rep.pairs.push_back(pc);
        }
    }
    return rep;
}

inline std::string correlation_csv(const CorrelationReport& rep) {
    std::string out = "k1,k2,zigzag_distance,r,n,bootstrap_stderr\n";
    for (const auto& p : rep.pairs) {
        out += std::to_string(p.k1) + ',' + std::to_string(p.k2) + ',' +
               std::to_string(p.k2 - p.k1) + ',';
        out += p.r ? format_double(*p.r) : std::string("nan");
        out += ',' + std::to_string(p.n) + ',' + format_double(p.bootstrap_stderr) + '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// Per-position standard deviations (8x8 map, log10 scale)

inline constexpr double kLogStdFloor = -6.0;  // sentinel for zero variance

inline std::array<double, 64> position_std_map(const jpeg::QuantizedImage& img, int component = 0) {
    const jpeg::BlockGrid& grid = img.components.at(static_cast<std::size_t>(component));
    const std::size_t n = grid.block_count();
    if (n < 2) throw InsufficientData("position_std_map: need at least 2 blocks");
    std::array<double, 64> out{};
    for (int natural = 0; natural < 64; ++natural) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += grid.coeffs[i * 64 + static_cast<std::size_t>(natural)];
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = grid.coeffs[i * 64 + static_cast<std::size_t>(natural)] - mean;
            var += d * d;
        }
        var /= static_cast<double>(n - 1);
        const double sd = std::sqrt(var);
        out[static_cast<std::size_t>(natural)] =
            sd > 0.0 ? std::max(std::log10(sd), kLogStdFloor) : kLogStdFloor;
    }
    return out;
}

inline std::string std_map_csv(const std::array<double, 64>& m) {
    std::string out;
    for (int r = 0; r < 8; ++r) {
        for (int c = 0; c < 8; ++c) {
            out += format_double(m[static_cast<std::size_t>(r * 8 + c)]);
            out += c == 7 ? '\n' : ',';
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Histogram with fitted Laplace overlay

struct DistributionOverlay {
    double sigma_mle = 0.0;
    std::size_t n = 0;
    // one row per integer value in the populated range
    std::vector<int> value;
    std::vector<double> empirical;  // probability mass
    std::vector<double> model;      // Laplace pdf at the integer
};

inline DistributionOverlay distribution_overlay(std::span<const std::int32_t> values,
                                                bool deltas = false,
                                                double sigma_floor = 1e-6) {
    if (values.empty()) throw EmptyInput("distribution_overlay: empty input");
    std::vector<std::int32_t> work(values.begin(), values.end());
    if (deltas) work = coeff::delta_dc(std::span<const std::int32_t>(work));

    DistributionOverlay ov;
    ov.n = work.size();
    double sum_abs = 0.0;
    std::int32_t lo = work[0], hi = work[0];
    std::map<std::int32_t, std::size_t> hist;
    for (std::int32_t v : work) {
        sum_abs += std::abs(static_cast<double>(v));
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        ++hist[v];
    }
    ov.sigma_mle = std::max(sum_abs / static_cast<double>(work.size()), sigma_floor);
    for (std::int32_t v = lo; v <= hi; ++v) {
        const auto it = hist.find(v);
        const double mass =
            it == hist.end() ? 0.0
                             : static_cast<double>(it->second) / static_cast<double>(work.size());
        ov.value.push_back(v);
        ov.empirical.push_back(mass);
        ov.model.push_back(model::laplace_pdf(static_cast<double>(v), ov.sigma_mle));
    }
    return ov;
}

inline std::string overlay_csv(const DistributionOverlay& ov) {
    std::string out = "value,empirical,model\n";
    for (std::size_t i = 0; i < ov.value.size(); ++i) {
        out += std::to_string(ov.value[i]) + ',' + format_double(ov.empirical[i]) + ',' +
               format_double(ov.model[i]) + '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// Zero fractions per bucket

inline std::array<double, 64> zero_fractions(const jpeg::QuantizedImage& img, int component = 0) {
    const jpeg::BlockGrid& grid = img.components.at(static_cast<std::size_t>(component));
    const std::size_t n = grid.block_count();
    std::array<double, 64> out{};
    for (int k = 0; k < 64; ++k) {
        coeff::BucketView view(grid, component, k);
        std::size_t zeros = 0;
        for (std::size_t i = 0; i < n; ++i) zeros += view[i] == 0;
        out[static_cast<std::size_t>(k)] =
            n == 0 ? 0.0 : static_cast<double>(zeros) / static_cast<double>(n);
    }
    return out;
}

inline std::string zero_fractions_csv(const std::array<double, 64>& zf) {
    std::string out = "bucket,zero_fraction\n";
    for (int k = 0; k < 64; ++k)
        out += std::to_string(k) + ',' + format_double(zf[static_cast<std::size_t>(k)]) + '\n';
    return out;
}

// Spearman rank correlation (average ranks for ties); used by the trend
// checks on the std map and zero fractions.
inline double spearman(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size();
    auto ranks = [n](std::span<const double> v) {
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
            return v[x] < v[y];
        });
        std::vector<double> r(n);
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
            const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
            for (std::size_t t = i; t <= j; ++t) r[idx[t]] = avg;
            i = j + 1;
        }
        return r;
    };
    const auto ra = ranks(a);
    const auto rb = ranks(b);
    const auto r = predict::pearson(ra, rb);
    return r ? *r : 0.0;
}

} // namespace jrepack::stats

#endif
