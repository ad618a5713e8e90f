#ifndef JREPACK_PREDICT_PREDICTOR_HPP
#define JREPACK_PREDICT_PREDICTOR_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "jrepack/coeff/buckets.hpp"
#include "jrepack/common.hpp"
#include "jrepack/predict/params.hpp"

namespace jrepack::predict {

inline double smooth_update(double sigma_prev, double coeff_abs, double alpha,
                            double sigma_min = 0.05) {
    const double s = (1.0 - alpha) * sigma_prev + alpha * coeff_abs;
    return s > sigma_min ? s : sigma_min;
}

inline double smooth_update_variance(double var_prev, double coeff_sq, double alpha,
                                     double var_min = 0.05 * 0.05) {
    const double v = (1.0 - alpha) * var_prev + alpha * coeff_sq;
    return v > var_min ? v : var_min;
}

// Mean absolute value, the maximum-likelihood scale of a zero-mean Laplace
// sample, floored at sigma_min.
inline double mle_sigma(std::span<const double> samples, double sigma_min = 0.05) {
    if (samples.empty()) throw EmptyInput("mle_sigma: empty sample set");
    double sum = 0.0;
    for (double v : samples) sum += std::abs(v);
    const double s = sum / static_cast<double>(samples.size());
    return s > sigma_min ? s : sigma_min;
}

// Per-(component, bucket) sigma estimator. One value is stored per block:
// the blended prediction used to code that block. Directional estimates for
// a later block apply one smoothing step to a neighbor's stored value with
// the coefficient observed at that neighbor, which keeps each direction a
// causal 1D series. predict(i) must be called for i = 0,1,2,... in raster
// order and reads `values` only at indices < i.
class SigmaPredictor {
public:
    SigmaPredictor(const PredictorParams& params, int blocks_wide, std::size_t block_count)
        : p_(params), bw_(blocks_wide), stored_(block_count, 0.0) {}

    double predict(std::size_t i, std::span<const std::int32_t> values,
                   std::optional<double> partner_prev_abs = std::nullopt) {
        double sigma_dir;
        if (i == 0) {
            sigma_dir = p_.sigma_init;
        } else {
            const auto nb = coeff::neighbor_indices(i, bw_);
            double acc = 0.0, wsum = 0.0;
            const double var_min = p_.sigma_min * p_.sigma_min;
            auto add = [&](const std::optional<std::size_t>& j, double weight) {
                if (!j) return;
                const double obs = std::abs(static_cast<double>(values[*j]));
                if (p_.variance_mode)
                    acc += weight * smooth_update_variance(stored_[*j], obs * obs, p_.alpha, var_min);
                else
                    acc += weight * smooth_update(stored_[*j], obs, p_.alpha, p_.sigma_min);
                wsum += weight;
            };
            add(nb.west, p_.blend_a);
            add(nb.north, p_.blend_a);
            add(nb.north_west, p_.blend_b);
            if (wsum <= 0.0) {
                sigma_dir = p_.sigma_init;
            } else {
                const double blended = acc / wsum;
                sigma_dir = p_.variance_mode ? std::sqrt(blended) : blended;
            }
        }

        double sigma = sigma_dir;
        if (partner_prev_abs && i > 0) {
            const double prev_sigma = p_.variance_mode ? std::sqrt(stored_[i - 1]) : stored_[i - 1];
            const double cross = p_.gamma * prev_sigma + (1.0 - p_.gamma) * (*partner_prev_abs);
            sigma = 0.5 * (sigma_dir + cross);
        }
        if (sigma < p_.sigma_min) sigma = p_.sigma_min;
        stored_[i] = p_.variance_mode ? sigma * sigma : sigma;
        return sigma;
    }

    double stored_sigma(std::size_t i) const {
        return p_.variance_mode ? std::sqrt(stored_[i]) : stored_[i];
    }

private:
    PredictorParams p_;
    int bw_;
    std::vector<double> stored_;
};

// Pearson correlation; nullopt when either series is constant.
inline std::optional<double> pearson(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size();
    if (n != b.size() || n < 2) return std::nullopt;
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double saa = 0.0, sbb = 0.0, sab = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double da = a[i] - ma, db = b[i] - mb;
        saa += da * da;
        sbb += db * db;
        sab += da * db;
    }
    if (saa <= 0.0 || sbb <= 0.0) return std::nullopt;
    return sab / std::sqrt(saa * sbb);
}

// Most linearly dependent earlier bucket per bucket, measured as the Pearson
// correlation of |coded values|. Entry k == k means "no partner" (bucket 0,
// or no earlier bucket with a defined correlation). Only earlier buckets are
// eligible: per-bucket payloads decode in zigzag order, so a later bucket is
// not yet available when bucket k is decoded.
inline std::array<std::uint8_t, 64> compute_partner_map(
    const std::vector<std::vector<std::int32_t>>& coded_values) {
    std::array<std::uint8_t, 64> map{};
    std::vector<std::vector<double>> abs_vals(64);
    for (int k = 0; k < 64; ++k) {
        const auto& v = coded_values[static_cast<std::size_t>(k)];
        abs_vals[static_cast<std::size_t>(k)].resize(v.size());
        for (std::size_t i = 0; i < v.size(); ++i)
            abs_vals[static_cast<std::size_t>(k)][i] = std::abs(static_cast<double>(v[i]));
    }
    for (int k = 0; k < 64; ++k) {
        map[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(k);  // sentinel: none
        double best = -2.0;
        for (int m = 0; m < k; ++m) {
            const auto r = pearson(abs_vals[static_cast<std::size_t>(k)],
                                   abs_vals[static_cast<std::size_t>(m)]);
            if (r && *r > best) {
                best = *r;
                map[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(m);
            }
        }
    }
    return map;
}

} // namespace jrepack::predict

#endif
