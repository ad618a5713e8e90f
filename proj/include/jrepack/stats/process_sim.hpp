#ifndef JREPACK_STATS_PROCESS_SIM_HPP
#define JREPACK_STATS_PROCESS_SIM_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "jrepack/common.hpp"
#include "jrepack/stats/reports.hpp"
#include "jrepack/stats/rng.hpp"

namespace jrepack::stats {

// Monte-Carlo study of the smoothing recursion
//   sigma_1 = beta |Z_0|,   sigma_k = alpha sigma_{k-1} + beta |Z_{k-1}|
// with Z_i Laplace, E|Z_i| = s. Empirical moments are reported next to two
// references: the exact moments obtained by directly summing the unrolled
// recursion sigma_k = beta (alpha^{k-1}|Z_0| + ... + |Z_{k-1}|), and the
// closed forms printed in the source material, which disagree with that
// summation (they grow linearly in k); both are emitted so the comparison is
// visible in the data.
struct ProcessMomentsRow {
    int k = 0;
    double emp_mean = 0.0, emp_var = 0.0;
    double se_mean = 0.0, se_var = 0.0;
    double exact_mean = 0.0, exact_var = 0.0;
    double paper_mean = 0.0, paper_var = 0.0;
};

struct ProcessMomentsReport {
    double alpha = 0.0, beta = 0.0, scale = 0.0;
    std::size_t trials = 0;
    std::vector<ProcessMomentsRow> rows;  // k = 1..k_max
};

inline ProcessMomentsReport simulate_sigma_process(double alpha, double beta, double s,
                                                   int k_max, std::size_t trials,
                                                   std::uint64_t seed = 1) {
    if (!(std::abs(alpha) < 1.0)) throw DomainError("simulate_sigma_process: |alpha| must be < 1");
    if (!(beta > 0.0) || !(s > 0.0)) throw DomainError("simulate_sigma_process: beta, s must be positive");
    if (k_max < 1 || trials < 1) throw DomainError("simulate_sigma_process: k_max and trials must be >= 1");

    const std::size_t km = static_cast<std::size_t>(k_max);
    std::vector<double> sum(km, 0.0), sum2(km, 0.0), sum3(km, 0.0), sum4(km, 0.0);

    Rng rng(seed);
    for (std::size_t t = 0; t < trials; ++t) {
        double sigma = 0.0;
        for (std::size_t k = 0; k < km; ++k) {
            sigma = alpha * sigma + beta * std::abs(rng.laplace(s));
            const double s1 = sigma, s2 = s1 * s1;
            sum[k] += s1;
            sum2[k] += s2;
            sum3[k] += s2 * s1;
            sum4[k] += s2 * s2;
        }
    }

    ProcessMomentsReport rep;
    rep.alpha = alpha;
    rep.beta = beta;
    rep.scale = s;
    rep.trials = trials;
    const double n = static_cast<double>(trials);
    for (std::size_t k = 0; k < km; ++k) {
        ProcessMomentsRow row;
        row.k = static_cast<int>(k) + 1;
        const double m1 = sum[k] / n;
        const double m2 = sum2[k] / n;
        const double var = std::max(0.0, m2 - m1 * m1);
        row.emp_mean = m1;
        row.emp_var = var;
        row.se_mean = std::sqrt(var / n);
        // se of the variance estimate via the empirical fourth central moment
        const double m3 = sum3[k] / n;
        const double m4 = sum4[k] / n;
        const double mu4 = m4 - 4.0 * m3 * m1 + 6.0 * m2 * m1 * m1 - 3.0 * m1 * m1 * m1 * m1;
        row.se_var = std::sqrt(std::max(0.0, mu4 - var * var) / n);

        // direct summation of the unrolled recursion, independent of the
        // simulation loop: E|Z| = s, Var|Z| = s^2
        double mean_acc = 0.0, var_acc = 0.0, apow = 1.0;
        for (std::size_t j = 0; j <= k; ++j) {
            mean_acc += apow;
            var_acc += apow * apow;
            apow *= alpha;
        }
        row.exact_mean = beta * s * mean_acc;
        row.exact_var = beta * beta * s * s * var_acc;

        const double kk = static_cast<double>(k + 1);
        row.paper_mean = beta * s * (1.0 + std::pow(alpha, kk - 1.0)) / 2.0 * kk;
        row.paper_var = beta * s * beta * s * (1.0 + std::pow(alpha, 2.0 * kk - 2.0)) / 2.0 * kk;
        rep.rows.push_back(row);
    }
    return rep;
}

inline std::string process_csv(const ProcessMomentsReport& rep) {
    std::string out =
        "k,emp_mean,emp_var,se_mean,se_var,exact_mean,exact_var,paper_mean,paper_var\n";
    for (const auto& r : rep.rows) {
        out += std::to_string(r.k) + ',' + format_double(r.emp_mean) + ',' +
               format_double(r.emp_var) + ',' + format_double(r.se_mean) + ',' +
               format_double(r.se_var) + ',' + format_double(r.exact_mean) + ',' +
               format_double(r.exact_var) + ',' + format_double(r.paper_mean) + ',' +
               format_double(r.paper_var) + '\n';
    }
    return out;
}

} // namespace jrepack::stats

#endif
