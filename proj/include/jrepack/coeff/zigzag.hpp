#ifndef JREPACK_COEFF_ZIGZAG_HPP
#define JREPACK_COEFF_ZIGZAG_HPP

#include <array>

namespace jrepack {
namespace detail {

constexpr std::array<int, 64> build_zigzag_to_natural() {
    std::array<int, 64> zz{};
    int k = 0;
    for (int d = 0; d < 15; ++d) {  // anti-diagonals, d = row + col
        const int r_lo = d < 8 ? 0 : d - 7;
        const int r_hi = d < 8 ? d : 7;
        if (d % 2 == 0) {
            for (int r = r_hi; r >= r_lo; --r) zz[k++] = r * 8 + (d - r);
        } else {
            for (int r = r_lo; r <= r_hi; ++r) zz[k++] = r * 8 + (d - r);
        }
    }
    return zz;
}

constexpr std::array<int, 64> invert_permutation(const std::array<int, 64>& p) {
    std::array<int, 64> inv{};
    for (int i = 0; i < 64; ++i) inv[p[i]] = i;
    return inv;
}

} // namespace detail

// kZigzagToNatural[k] is the row-major position inside the 8x8 block of the
// coefficient that appears k-th in JPEG scan order (k = 0 is DC).
inline constexpr std::array<int, 64> kZigzagToNatural = detail::build_zigzag_to_natural();
inline constexpr std::array<int, 64> kNaturalToZigzag = detail::invert_permutation(kZigzagToNatural);

} // namespace jrepack

#endif
