#ifndef JREPACK_STATS_RNG_HPP
#define JREPACK_STATS_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace jrepack::stats {

// Seeded generator with an explicit uniform->double mapping, so emitted
// report bytes depend only on the seed and not on library internals of
// distribution objects.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // strictly inside (0, 1)
    double uniform01() {
        return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
    }

    // zero-mean Laplace with scale b: E|Z| = b, Var Z = 2 b^2.
    double laplace(double scale) {
        const double u = uniform01() - 0.5;
        const double mag = -scale * std::log1p(-2.0 * std::abs(u));
        return u < 0.0 ? -mag : mag;
    }

    // uniform integer in [0, n)
    std::size_t index(std::size_t n) {
        return static_cast<std::size_t>(gen_() % n);
    }

private:
    std::mt19937_64 gen_;
};

} // namespace jrepack::stats

#endif
