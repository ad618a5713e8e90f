#ifndef JREPACK_PREDICT_PARAMS_HPP
#define JREPACK_PREDICT_PARAMS_HPP

#include <cmath>
#include <cstdint>

#include "jrepack/common.hpp"

namespace jrepack::predict {

// Q16.16 fixed point used everywhere parameters cross a file boundary, so
// encoder and decoder always work from identical values.
inline std::uint32_t to_q16(double v) {
    if (!(v >= 0.0) || v > 65535.0 || !std::isfinite(v))
        throw ConfigError("fixed-point parameter out of range");
    return static_cast<std::uint32_t>(std::llround(v * 65536.0));
}

inline double from_q16(std::uint32_t v) {
    return static_cast<double>(v) / 65536.0;
}

struct PredictorParams {
    double alpha = 0.15;       // smoothing weight
    double blend_a = 0.4;      // horizontal and vertical blend weight
    double blend_b = 0.2;      // diagonal blend weight
    double gamma = 0.9;        // cross-bucket smoothing weight
    double sigma_init = 1.0;   // sigma for the first block of every bucket
    double sigma_min = 0.05;   // floor applied to every emitted sigma
    bool variance_mode = false;   // smooth squared quantities instead of |x|
    bool cross_bucket = false;

    void validate() const {
        const bool weights_ok = alpha > 0.0 && alpha < 1.0 && gamma > 0.0 && gamma < 1.0 &&
                                blend_a > 0.0 && blend_a < 1.0 && blend_b > 0.0 && blend_b < 1.0;
        if (!weights_ok) throw ConfigError("predictor weights must lie in (0,1)");
        if (!(blend_b < blend_a)) throw ConfigError("diagonal weight must be below horizontal/vertical");
        if (std::abs(2.0 * blend_a + blend_b - 1.0) > 1e-4)
            throw ConfigError("blend weights must satisfy 2A + B = 1");
        if (!(sigma_init > 0.0)) throw ConfigError("sigma_init must be positive");
        if (!(sigma_min > 0.0)) throw ConfigError("sigma_min must be positive");
    }

    // Round-trip through the wire encoding; compress() applies this before
    // prediction so decode sees bit-identical parameters.
    PredictorParams canonicalized() const {
        PredictorParams p = *this;
        p.alpha = from_q16(to_q16(p.alpha));
        p.blend_a = from_q16(to_q16(p.blend_a));
        p.blend_b = from_q16(to_q16(p.blend_b));
        p.gamma = from_q16(to_q16(p.gamma));
        p.sigma_init = from_q16(to_q16(p.sigma_init));
        p.sigma_min = from_q16(to_q16(p.sigma_min));
        return p;
    }
};

} // namespace jrepack::predict

#endif
