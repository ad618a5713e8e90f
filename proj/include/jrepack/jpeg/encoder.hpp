#ifndef JREPACK_JPEG_ENCODER_HPP
#define JREPACK_JPEG_ENCODER_HPP

#include <array>
#include <bit>
#include <cstdint>

#include "jrepack/coeff/zigzag.hpp"
#include "jrepack/common.hpp"
#include "jrepack/jpeg/bitio.hpp"
#include "jrepack/jpeg/decoder.hpp"
#include "jrepack/jpeg/huffman.hpp"
#include "jrepack/jpeg/types.hpp"

namespace jrepack::jpeg {

namespace detail {

inline int magnitude_category(int v) {
    const std::uint32_t a = static_cast<std::uint32_t>(v < 0 ? -v : v);
    return 32 - std::countl_zero(a);  // 0 for v == 0
}

inline std::uint32_t magnitude_bits(int v, int cat) {
    // positive values code as-is; negative ones as (v - 1) masked, which is
    // the one's-complement form extend_value() inverts
    const int raw = v >= 0 ? v : v - 1;
    return static_cast<std::uint32_t>(raw) & ((1u << cat) - 1);
}

} // namespace detail

// Re-encode the scan deterministically from coefficients + stored tables and
// splice it between the preserved header bytes and trailer. For files written
// by canonical encoders this reproduces the original byte-for-byte; the
// container layer verifies that and falls back to the raw scan otherwise.
inline Bytes serialize_jpeg(const QuantizedImage& img) {
    const JpegStructure& s = img.structure;
    Bytes out = s.pre_scan;

    std::array<HuffmanEncoder, 4> dc_enc, ac_enc;
    for (int i = 0; i < 4; ++i) {
        if (s.dc_tables[static_cast<std::size_t>(i)].defined)
            dc_enc[static_cast<std::size_t>(i)].build(s.dc_tables[static_cast<std::size_t>(i)]);
        if (s.ac_tables[static_cast<std::size_t>(i)].defined)
            ac_enc[static_cast<std::size_t>(i)].build(s.ac_tables[static_cast<std::size_t>(i)]);
    }

    ScanBitWriter bw(out);
    std::array<int, 4> pred{};

    auto encode_block = [&](int ci, std::size_t block_index) {
        const ComponentSpec& c = s.components[static_cast<std::size_t>(ci)];
        const BlockGrid& g = img.components[static_cast<std::size_t>(ci)];
        const std::int16_t* blk = g.block(block_index);

        const int diff = blk[0] - pred[static_cast<std::size_t>(ci)];
        pred[static_cast<std::size_t>(ci)] = blk[0];
        const int dcat = detail::magnitude_category(diff);
        if (dcat > 15) throw EncodingOverflow("DC difference too large for baseline coding");
        dc_enc[c.dc_table].put(bw, static_cast<std::uint8_t>(dcat));
        if (dcat > 0) bw.put_bits(detail::magnitude_bits(diff, dcat), dcat);

        int run = 0;
        for (int k = 1; k < 64; ++k) {
            const int v = blk[kZigzagToNatural[static_cast<std::size_t>(k)]];
            if (v == 0) {
                ++run;
                continue;
            }
            while (run > 15) {
                ac_enc[c.ac_table].put(bw, 0xF0);  // ZRL
                run -= 16;
            }
            const int cat = detail::magnitude_category(v);
            if (cat > 15) throw EncodingOverflow("AC coefficient too large for baseline coding");
            ac_enc[c.ac_table].put(bw, static_cast<std::uint8_t>((run << 4) | cat));
            bw.put_bits(detail::magnitude_bits(v, cat), cat);
            run = 0;
        }
        if (run > 0) ac_enc[c.ac_table].put(bw, 0x00);  // EOB
    };

    detail::scan_walk(
        s, encode_block,
        [&](std::uint32_t n) {
            bw.marker(static_cast<std::uint8_t>(0xD0 + (n & 7)));
            pred.fill(0);
        });

    bw.marker(0xD9);
    out.insert(out.end(), s.trailer.begin(), s.trailer.end());
    return out;
}

} // namespace jrepack::jpeg

#endif
