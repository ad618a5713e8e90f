#ifndef JREPACK_MODEL_LAPLACE_HPP
#define JREPACK_MODEL_LAPLACE_HPP

#include <cmath>
#include <span>

#include "jrepack/common.hpp"

namespace jrepack::model {

// Zero-mean Laplace density p(x) = 1/(2 sigma) * exp(-|x|/sigma).
inline double laplace_pdf(double x, double sigma) {
    if (!(sigma > 0.0)) throw DomainError("laplace_pdf: sigma must be positive");
    return std::exp(-std::abs(x) / sigma) / (2.0 * sigma);
}

inline double laplace_cdf(double x, double sigma) {
    if (!(sigma > 0.0)) throw DomainError("laplace_cdf: sigma must be positive");
    if (x < 0.0) return 0.5 * std::exp(x / sigma);
    return 1.0 - 0.5 * std::exp(-x / sigma);
}

// Probability of the integer symbol x under the discretized model,
// F(x + 1/2) - F(x - 1/2). Branches are expanded so tail values do not
// cancel to zero in double arithmetic.
inline double symbol_prob(int x, double sigma) {
    if (!(sigma > 0.0)) throw DomainError("symbol_prob: sigma must be positive");
    const double ax = std::abs(static_cast<double>(x));
    if (x == 0) return 1.0 - std::exp(-0.5 / sigma);
    // x != 0: mass of [|x|-1/2, |x|+1/2] on one side
    return 0.5 * (std::exp(-(ax - 0.5) / sigma) - std::exp(-(ax + 0.5) / sigma));
}

// Log-likelihood of i.i.d. samples under the zero-mean Laplace density.
inline double log_likelihood(std::span<const double> samples, double sigma) {
    if (!(sigma > 0.0)) throw DomainError("log_likelihood: sigma must be positive");
    double sum_abs = 0.0;
    for (double v : samples) sum_abs += std::abs(v);
    const double n = static_cast<double>(samples.size());
    return -n * std::log(2.0 * sigma) - sum_abs / sigma;
}

} // namespace jrepack::model

#endif
