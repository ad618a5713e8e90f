#ifndef JREPACK_MODEL_TABLES_HPP
#define JREPACK_MODEL_TABLES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <numeric>
#include <span>
#include <vector>

#include "jrepack/common.hpp"
#include "jrepack/model/laplace.hpp"

namespace jrepack::model {

struct TableConfig {
    int levels = 64;
    double sigma_lo = 0.095;
    double sigma_hi = 256.0;
    std::uint32_t total = 1u << 20;  // cumulative scale T, power of two
    std::uint32_t prob_floor = 1;    // minimum per-symbol frequency
    int alphabet_min = kAlphabetMin;
    int alphabet_max = kAlphabetMax;

    int alphabet_size() const { return alphabet_max - alphabet_min + 1; }
};

// Cumulative frequency tables over the coefficient alphabet, one table per
// quantized sigma level. Built identically and independently by encoder and
// decoder, so construction must be fully deterministic.
class LaplaceTableSet {
public:
    LaplaceTableSet() = default;

    static LaplaceTableSet build(const TableConfig& cfg) {
        validate(cfg);
        LaplaceTableSet t;
        t.cfg_ = cfg;
        t.sigma_levels_.resize(static_cast<std::size_t>(cfg.levels));
        const double log_lo = std::log(cfg.sigma_lo);
        const double step = cfg.levels > 1
            ? (std::log(cfg.sigma_hi) - log_lo) / static_cast<double>(cfg.levels - 1)
            : 0.0;
        for (int i = 0; i < cfg.levels; ++i)
            t.sigma_levels_[static_cast<std::size_t>(i)] = std::exp(log_lo + step * i);
        t.log_lo_ = log_lo;
        t.log_step_ = step;

        const int nsym = cfg.alphabet_size();
        t.cum_.resize(static_cast<std::size_t>(cfg.levels));
        for (int lev = 0; lev < cfg.levels; ++lev)
            t.cum_[static_cast<std::size_t>(lev)] =
                build_level(t.sigma_levels_[static_cast<std::size_t>(lev)], cfg, nsym);
        return t;
    }

    const TableConfig& config() const { return cfg_; }
    const std::vector<double>& sigma_levels() const { return sigma_levels_; }
    double level_sigma(int level) const { return sigma_levels_[static_cast<std::size_t>(level)]; }
    std::uint32_t total() const { return cfg_.total; }
    int levels() const { return cfg_.levels; }

    // Nearest grid level in log-space, clamped to the grid ends.
    int quantize_sigma(double sigma) const {
        if (!(sigma > 0.0) || !std::isfinite(sigma)) return 0;
        if (cfg_.levels <= 1 || log_step_ == 0.0) return 0;
        const double idx = (std::log(sigma) - log_lo_) / log_step_;
        const long long r = std::llround(idx);
        if (r < 0) return 0;
        if (r >= cfg_.levels) return cfg_.levels - 1;
        return static_cast<int>(r);
    }

    std::uint32_t freq(int level, int symbol) const {
        const auto& c = cum_[static_cast<std::size_t>(level)];
        const std::size_t i = sym_index(symbol);
        return c[i + 1] - c[i];
    }
    std::uint32_t cum_low(int level, int symbol) const {
        return cum_[static_cast<std::size_t>(level)][sym_index(symbol)];
    }

    // Symbol whose cumulative interval contains `value` (value < total).
    int find_symbol(int level, std::uint32_t value) const {
        const auto& c = cum_[static_cast<std::size_t>(level)];
        // first entry strictly greater than value, minus one
        const auto it = std::upper_bound(c.begin(), c.end(), value);
        const std::size_t idx = static_cast<std::size_t>(it - c.begin()) - 1;
        return cfg_.alphabet_min + static_cast<int>(idx);
    }

    bool in_alphabet(std::int64_t symbol) const {
        return symbol >= cfg_.alphabet_min && symbol <= cfg_.alphabet_max;
    }

    // Versioned binary blob, bit-exact across runs of the same build.
    Bytes dump() const {
        Bytes out;
        auto put_u32 = [&](std::uint32_t v) {
            for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
        };
        auto put_u64 = [&](std::uint64_t v) {
            for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
        };
        out.insert(out.end(), {'J', 'R', 'T', 'B'});
        out.push_back(1);  // blob version
        put_u32(static_cast<std::uint32_t>(cfg_.levels));
        std::uint64_t bits;
        std::memcpy(&bits, &cfg_.sigma_lo, 8);
        put_u64(bits);
        std::memcpy(&bits, &cfg_.sigma_hi, 8);
        put_u64(bits);
        put_u32(cfg_.total);
        put_u32(cfg_.prob_floor);
        put_u32(static_cast<std::uint32_t>(cfg_.alphabet_min));
        put_u32(static_cast<std::uint32_t>(cfg_.alphabet_max));
        for (const auto& level : cum_)
            for (std::uint32_t v : level) put_u32(v);
        return out;
    }

    static LaplaceTableSet load(std::span<const std::uint8_t> blob) {
        std::size_t pos = 0;
        auto get_u32 = [&]() {
            if (pos + 4 > blob.size()) throw CorruptStream("table blob truncated");
            std::uint32_t v = 0;
            for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(blob[pos++]) << (8 * i);
            return v;
        };
        auto get_u64 = [&]() {
            if (pos + 8 > blob.size()) throw CorruptStream("table blob truncated");
            std::uint64_t v = 0;
            for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(blob[pos++]) << (8 * i);
            return v;
        };
        if (blob.size() < 5 || blob[0] != 'J' || blob[1] != 'R' || blob[2] != 'T' || blob[3] != 'B')
            throw CorruptStream("bad table blob magic");
        if (blob[4] != 1) throw VersionMismatch("unsupported table blob version");
        pos = 5;
        TableConfig cfg;
        cfg.levels = static_cast<int>(get_u32());
        std::uint64_t bits = get_u64();
        std::memcpy(&cfg.sigma_lo, &bits, 8);
        bits = get_u64();
        std::memcpy(&cfg.sigma_hi, &bits, 8);
        cfg.total = get_u32();
        cfg.prob_floor = get_u32();
        cfg.alphabet_min = static_cast<int>(get_u32());
        cfg.alphabet_max = static_cast<int>(get_u32());
        validate(cfg);

        LaplaceTableSet t = build(cfg);  // reproduces sigma grid deterministically
        // overwrite frequencies with the stored ones and verify shape
        const std::size_t nsym = static_cast<std::size_t>(cfg.alphabet_size());
        for (auto& level : t.cum_) {
            for (std::size_t i = 0; i <= nsym; ++i) level[i] = get_u32();
            if (level.front() != 0 || level.back() != cfg.total)
                throw CorruptStream("table blob cumulative bounds invalid");
        }
        if (pos != blob.size()) throw CorruptStream("table blob trailing bytes");
        return t;
    }

private:
    static void validate(const TableConfig& cfg) {
        if (cfg.levels < 1 || cfg.sigma_lo <= 0.0 || cfg.sigma_hi < cfg.sigma_lo)
            throw ConfigError("invalid sigma grid");
        if (cfg.alphabet_max < cfg.alphabet_min) throw ConfigError("empty alphabet");
        if (cfg.prob_floor < 1) throw ConfigError("prob_floor must be >= 1");
        const std::uint64_t nsym = static_cast<std::uint64_t>(cfg.alphabet_size());
        if (static_cast<std::uint64_t>(cfg.total) < nsym * cfg.prob_floor + 1)
            throw ConfigError("scale too small to give every alphabet symbol prob_floor");
        if ((cfg.total & (cfg.total - 1)) != 0) throw ConfigError("total scale must be a power of two");
    }

    std::size_t sym_index(int symbol) const {
        return static_cast<std::size_t>(symbol - cfg_.alphabet_min);
    }

    static std::vector<std::uint32_t> build_level(double sigma, const TableConfig& cfg, int nsym) {
        std::vector<std::uint32_t> f(static_cast<std::size_t>(nsym));
        const double T = static_cast<double>(cfg.total);
        std::uint64_t sum = 0;
        for (int i = 0; i < nsym; ++i) {
            const int x = cfg.alphabet_min + i;
            const double p = symbol_prob(x, sigma);
            const long long r = std::llround(T * p);
            const std::uint32_t v = std::max<std::uint32_t>(
                cfg.prob_floor, static_cast<std::uint32_t>(std::max(0LL, r)));
            f[static_cast<std::size_t>(i)] = v;
            sum += v;
        }

        // Deterministic renormalization to total exactly T. Excess mass
        // created by the floor is taken from the largest non-mode symbols so
        // the mode frequency stays at its rounded value; ties break toward
        // smaller |x|, then toward positive x.
        if (sum != cfg.total) {
            std::vector<int> order(static_cast<std::size_t>(nsym));
            std::iota(order.begin(), order.end(), 0);
            const auto abs_sym = [&](int i) {
                return std::abs(cfg.alphabet_min + i);
            };
            std::sort(order.begin(), order.end(), [&](int a, int b) {
                if (f[static_cast<std::size_t>(a)] != f[static_cast<std::size_t>(b)])
                    return f[static_cast<std::size_t>(a)] > f[static_cast<std::size_t>(b)];
                if (abs_sym(a) != abs_sym(b)) return abs_sym(a) < abs_sym(b);
                return (cfg.alphabet_min + a) > (cfg.alphabet_min + b);
            });
            const bool zero_in_alphabet = cfg.alphabet_min <= 0 && cfg.alphabet_max >= 0;
            const std::size_t zero_idx = zero_in_alphabet ? static_cast<std::size_t>(-cfg.alphabet_min)
                                                          : static_cast<std::size_t>(nsym);
            if (sum > cfg.total) {
                std::uint64_t deficit = sum - cfg.total;
                for (int idx : order) {
                    if (deficit == 0) break;
                    const std::size_t i = static_cast<std::size_t>(idx);
                    if (i == zero_idx) continue;
                    const std::uint64_t headroom = f[i] - cfg.prob_floor;
                    const std::uint64_t take = std::min(headroom, deficit);
                    f[i] -= static_cast<std::uint32_t>(take);
                    deficit -= take;
                }
                if (deficit > 0) {
                    // only the mode has headroom left; validate() guarantees
                    // it can absorb the rest without dropping below the floor
                    if (!zero_in_alphabet) throw ConfigError("renormalization failed");
                    f[zero_idx] -= static_cast<std::uint32_t>(deficit);
                }
            } else {
                std::uint64_t excess = cfg.total - sum;
                std::size_t target = static_cast<std::size_t>(order.front());
                for (int idx : order) {
                    if (static_cast<std::size_t>(idx) != zero_idx) {
                        target = static_cast<std::size_t>(idx);
                        break;
                    }
                }
                f[target] += static_cast<std::uint32_t>(excess);
            }
        }

        std::vector<std::uint32_t> cum(static_cast<std::size_t>(nsym) + 1);
        cum[0] = 0;
        for (int i = 0; i < nsym; ++i)
            cum[static_cast<std::size_t>(i) + 1] = cum[static_cast<std::size_t>(i)] + f[static_cast<std::size_t>(i)];
        return cum;
    }

    TableConfig cfg_;
    std::vector<double> sigma_levels_;
    double log_lo_ = 0.0;
    double log_step_ = 0.0;
    std::vector<std::vector<std::uint32_t>> cum_;  // per level, alphabet_size()+1 entries
};

// Rounded pre-floor frequency, exposed for symmetry checks and oracles.
inline std::uint32_t rounded_frequency(int symbol, double sigma, const TableConfig& cfg) {
    const long long r = std::llround(static_cast<double>(cfg.total) * symbol_prob(symbol, sigma));
    return static_cast<std::uint32_t>(std::max(0LL, r));
}

} // namespace jrepack::model

#endif
