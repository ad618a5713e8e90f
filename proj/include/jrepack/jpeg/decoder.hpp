#ifndef JREPACK_JPEG_DECODER_HPP
#define JREPACK_JPEG_DECODER_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "jrepack/coeff/zigzag.hpp"
#include "jrepack/common.hpp"
#include "jrepack/jpeg/bitio.hpp"
#include "jrepack/jpeg/huffman.hpp"
#include "jrepack/jpeg/types.hpp"

namespace jrepack::jpeg {

// Allocation guards for hostile headers.
inline constexpr std::uint64_t kMaxPixels = 1ull << 24;       // ~16.7 MP
inline constexpr std::uint64_t kMaxCoefficients = 1ull << 26; // across all components

namespace detail {

inline std::uint16_t read_u16(const Bytes& d, std::size_t pos) {
    if (pos + 2 > d.size()) throw CorruptStream("unexpected end of file");
    return static_cast<std::uint16_t>((d[pos] << 8) | d[pos + 1]);
}

inline int extend_value(std::uint32_t bits, int t) {
    // JPEG F.2.2.1: low-order bits of a magnitude category
    if (t == 0) return 0;
    if (bits < (1u << (t - 1))) return static_cast<int>(bits) - (1 << t) + 1;
    return static_cast<int>(bits);
}

// Walk the blocks of the single scan in coding order. on_restart(n) fires
// where the n-th restart marker belongs; on_block(comp, block_index) for
// every block including MCU padding blocks.
template <typename BlockFn, typename RestartFn>
void scan_walk(const JpegStructure& s, BlockFn&& on_block, RestartFn&& on_restart) {
    const std::size_t total_mcus =
        static_cast<std::size_t>(s.mcus_x()) * static_cast<std::size_t>(s.mcus_y());
    const int mx_count = s.mcus_x();
    for (std::size_t mcu = 0; mcu < total_mcus; ++mcu) {
        if (s.restart_interval != 0 && mcu != 0 && mcu % s.restart_interval == 0)
            on_restart(static_cast<std::uint32_t>(mcu / s.restart_interval - 1));
        if (s.components.size() == 1) {
            on_block(0, mcu);
            continue;
        }
        const int mx = static_cast<int>(mcu % static_cast<std::size_t>(mx_count));
        const int my = static_cast<int>(mcu / static_cast<std::size_t>(mx_count));
        for (int ci : s.scan_order) {
            const ComponentSpec& c = s.components[static_cast<std::size_t>(ci)];
            const int bw = s.blocks_wide(ci);
            for (int by = 0; by < c.v; ++by) {
                for (int bx = 0; bx < c.h; ++bx) {
                    const std::size_t row = static_cast<std::size_t>(my) * c.v + static_cast<std::size_t>(by);
                    const std::size_t col = static_cast<std::size_t>(mx) * c.h + static_cast<std::size_t>(bx);
                    on_block(ci, row * static_cast<std::size_t>(bw) + col);
                }
            }
        }
    }
}

} // namespace detail

// Parse every marker segment up to and including the SOS header. The raw
// bytes of that prefix are preserved verbatim in pre_scan; scan_begin points
// at the first entropy-coded byte.
inline JpegStructure parse_headers(const Bytes& data) {
    using detail::read_u16;
    JpegStructure s;
    if (data.size() < 2 || data[0] != 0xFF || data[1] != 0xD8)
        throw CorruptStream("missing SOI marker");
    std::size_t pos = 2;
    bool have_sof = false;
    std::array<bool, 4> quant_defined{};

    while (true) {
        if (pos >= data.size()) throw CorruptStream("no SOS marker before end of file");
        if (data[pos] != 0xFF) throw CorruptStream("expected marker segment");
        std::size_t mpos = pos;
        while (mpos + 1 < data.size() && data[mpos + 1] == 0xFF) ++mpos;  // fill bytes
        if (mpos + 1 >= data.size()) throw CorruptStream("truncated marker");
        const std::uint8_t m = data[mpos + 1];
        pos = mpos + 2;

        if (m == 0xD8) throw CorruptStream("unexpected second SOI");
        if (m == 0xD9) throw CorruptStream("EOI before any scan");
        if (m == 0x01 || (m >= 0xD0 && m <= 0xD7))
            throw CorruptStream("standalone marker before scan");

        if (m == 0xC0) {  // SOF0, baseline sequential
            if (have_sof) throw CorruptStream("duplicate frame header");
            const std::uint16_t len = read_u16(data, pos);
            if (len < 8 || pos + len > data.size()) throw CorruptStream("bad SOF0 length");
            std::size_t p = pos + 2;
            s.frame.precision = data[p++];
            s.frame.height = read_u16(data, p);
            p += 2;
            s.frame.width = read_u16(data, p);
            p += 2;
            s.frame.component_count = data[p++];
            if (s.frame.precision != 8) throw UnsupportedJpeg("only 8-bit precision supported");
            if (s.frame.component_count != 1 && s.frame.component_count != 3)
                throw UnsupportedJpeg("only 1- or 3-component images supported");
            if (s.frame.height == 0) throw UnsupportedJpeg("DNL-defined height not supported");
            if (s.frame.width == 0) throw CorruptStream("zero frame width");
            if (len != 8 + 3 * s.frame.component_count) throw CorruptStream("bad SOF0 length");
            const std::uint64_t pixels =
                static_cast<std::uint64_t>(s.frame.width) * static_cast<std::uint64_t>(s.frame.height);
            if (pixels > kMaxPixels) throw UnsupportedJpeg("image too large");
            for (int i = 0; i < s.frame.component_count; ++i) {
                ComponentSpec c;
                c.id = data[p++];
                const std::uint8_t hv = data[p++];
                c.h = hv >> 4;
                c.v = hv & 0x0F;
                c.quant_id = data[p++];
                if (c.h < 1 || c.h > 4 || c.v < 1 || c.v > 4)
                    throw CorruptStream("invalid sampling factors");
                if (c.quant_id > 3) throw CorruptStream("invalid quantization table id");
                s.components.push_back(c);
            }
            have_sof = true;
            pos += len;
            continue;
        }
        if (m == 0xC2 || m == 0xC6 || m == 0xCA || m == 0xCE)
            throw UnsupportedJpeg("progressive JPEG not supported");
        if (m == 0xC9 || m == 0xCB || m == 0xCD || m == 0xCF || m == 0xCC)
            throw UnsupportedJpeg("arithmetic-coded JPEG not supported");
        if (m == 0xC1 || m == 0xC3 || m == 0xC5 || m == 0xC7)
            throw UnsupportedJpeg("non-baseline frame type not supported");

        if (m == 0xC4) {  // DHT
            const std::uint16_t len = read_u16(data, pos);
            if (len < 2 || pos + len > data.size()) throw CorruptStream("bad DHT length");
            std::size_t p = pos + 2;
            const std::size_t end = pos + len;
            while (p < end) {
                if (p + 17 > end) throw CorruptStream("truncated DHT");
                const std::uint8_t tc_th = data[p++];
                const int tc = tc_th >> 4;
                const int th = tc_th & 0x0F;
                if (tc > 1 || th > 3) throw CorruptStream("invalid DHT class/id");
                HuffmanSpec spec;
                std::size_t total = 0;
                for (int i = 0; i < 16; ++i) {
                    spec.counts[static_cast<std::size_t>(i)] = data[p + static_cast<std::size_t>(i)];
                    total += spec.counts[static_cast<std::size_t>(i)];
                }
                p += 16;
                if (total > 256 || p + total > end) throw CorruptStream("truncated DHT symbols");
                spec.symbols.assign(data.begin() + static_cast<std::ptrdiff_t>(p),
                                    data.begin() + static_cast<std::ptrdiff_t>(p + total));
                spec.defined = true;
                p += total;
                // later definitions replace earlier ones; the scan decodes
                // with the last tables in effect
                (tc == 0 ? s.dc_tables : s.ac_tables)[static_cast<std::size_t>(th)] = std::move(spec);
            }
            pos += len;
            continue;
        }
        if (m == 0xDB) {  // DQT: values are opaque here, only ids are tracked
            const std::uint16_t len = read_u16(data, pos);
            if (len < 2 || pos + len > data.size()) throw CorruptStream("bad DQT length");
            std::size_t p = pos + 2;
            const std::size_t end = pos + len;
            while (p < end) {
                const std::uint8_t pq_tq = data[p];
                const int pq = pq_tq >> 4;
                const int tq = pq_tq & 0x0F;
                if (pq > 1 || tq > 3) throw CorruptStream("invalid DQT precision/id");
                const std::size_t size = 1 + (pq ? 128u : 64u);
                if (p + size > end) throw CorruptStream("truncated DQT");
                quant_defined[static_cast<std::size_t>(tq)] = true;
                p += size;
            }
            pos += len;
            continue;
        }
        if (m == 0xDD) {  // DRI
            const std::uint16_t len = read_u16(data, pos);
            if (len != 4 || pos + len > data.size()) throw CorruptStream("bad DRI length");
            s.restart_interval = read_u16(data, pos + 2);
            pos += len;
            continue;
        }
        if (m == 0xDC) throw CorruptStream("DNL segment before scan");
        if (m == 0xDA) {  // SOS
            if (!have_sof) throw CorruptStream("SOS before SOF");
            const std::uint16_t len = read_u16(data, pos);
            if (len < 6 || pos + len > data.size()) throw CorruptStream("bad SOS length");
            std::size_t p = pos + 2;
            const int ns = data[p++];
            if (ns != s.frame.component_count)
                throw UnsupportedJpeg("multi-scan JPEG not supported");
            if (len != 6 + 2 * ns) throw CorruptStream("bad SOS length");
            std::vector<bool> used(s.components.size(), false);
            for (int i = 0; i < ns; ++i) {
                const std::uint8_t cs = data[p++];
                const std::uint8_t tdta = data[p++];
                int ci = -1;
                for (std::size_t j = 0; j < s.components.size(); ++j) {
                    if (s.components[j].id == cs && !used[j]) {
                        ci = static_cast<int>(j);
                        break;
                    }
                }
                if (ci < 0) throw CorruptStream("scan references unknown component");
                used[static_cast<std::size_t>(ci)] = true;
                s.components[static_cast<std::size_t>(ci)].dc_table = tdta >> 4;
                s.components[static_cast<std::size_t>(ci)].ac_table = tdta & 0x0F;
                if ((tdta >> 4) > 3 || (tdta & 0x0F) > 3)
                    throw CorruptStream("invalid table selector");
                s.scan_order.push_back(ci);
            }
            const std::uint8_t ss = data[p++];
            const std::uint8_t se = data[p++];
            const std::uint8_t ahal = data[p++];
            if (ss != 0 || se != 63 || ahal != 0)
                throw CorruptStream("non-baseline spectral selection in SOS");
            pos += len;
            for (const auto& c : s.components) {
                if (!s.dc_tables[c.dc_table].defined || !s.ac_tables[c.ac_table].defined)
                    throw CorruptStream("scan references undefined huffman table");
                if (!quant_defined[c.quant_id])
                    throw CorruptStream("scan references undefined quantization table");
            }
            std::uint64_t total_coeffs = 0;
            for (std::size_t ci = 0; ci < s.components.size(); ++ci)
                total_coeffs += 64ull *
                                static_cast<std::uint64_t>(s.blocks_wide(static_cast<int>(ci))) *
                                static_cast<std::uint64_t>(s.blocks_high(static_cast<int>(ci)));
            if (total_coeffs > kMaxCoefficients) throw UnsupportedJpeg("image too large");
            s.pre_scan.assign(data.begin(), data.begin() + static_cast<std::ptrdiff_t>(pos));
            s.scan_begin = pos;
            return s;
        }
        if ((m >= 0xE0 && m <= 0xEF) || m == 0xFE || (m >= 0xF0 && m <= 0xFD)) {
            const std::uint16_t len = read_u16(data, pos);
            if (len < 2 || pos + len > data.size()) throw CorruptStream("bad segment length");
            pos += len;
            continue;
        }
        throw CorruptStream("unrecognized marker");
    }
}

inline QuantizedImage parse_jpeg(const Bytes& data) {
    JpegStructure s = parse_headers(data);

    std::array<HuffmanDecoder, 4> dc_dec, ac_dec;
    for (int i = 0; i < 4; ++i) {
        if (s.dc_tables[static_cast<std::size_t>(i)].defined)
            dc_dec[static_cast<std::size_t>(i)].build(s.dc_tables[static_cast<std::size_t>(i)]);
        if (s.ac_tables[static_cast<std::size_t>(i)].defined)
            ac_dec[static_cast<std::size_t>(i)].build(s.ac_tables[static_cast<std::size_t>(i)]);
    }

    QuantizedImage img;
    img.components.resize(s.components.size());
    for (std::size_t ci = 0; ci < s.components.size(); ++ci) {
        BlockGrid& g = img.components[ci];
        g.blocks_wide = s.blocks_wide(static_cast<int>(ci));
        g.blocks_high = s.blocks_high(static_cast<int>(ci));
        g.coeffs.assign(g.block_count() * 64, 0);
    }

    ScanBitReader br(data, s.scan_begin, data.size());
    std::array<int, 4> pred{};

    auto decode_block = [&](int ci, std::size_t block_index) {
        const ComponentSpec& c = s.components[static_cast<std::size_t>(ci)];
        BlockGrid& g = img.components[static_cast<std::size_t>(ci)];
        std::int16_t* blk = g.block(block_index);

        const std::uint8_t t = dc_dec[c.dc_table].decode(br);
        if (t > 15) throw CorruptStream("invalid DC category");
        const int diff = detail::extend_value(br.read_bits(t), t);
        pred[static_cast<std::size_t>(ci)] += diff;
        const int dc = pred[static_cast<std::size_t>(ci)];
        if (dc < kAlphabetMin || dc > kAlphabetMax)
            throw CorruptStream("DC coefficient out of range");
        blk[0] = static_cast<std::int16_t>(dc);

        int k = 1;
        while (k < 64) {
            const std::uint8_t rs = ac_dec[c.ac_table].decode(br);
            const int run = rs >> 4;
            const int size = rs & 0x0F;
            if (size == 0) {
                if (run == 15) {  // ZRL
                    k += 16;
                    if (k > 64) throw CorruptStream("ZRL overruns block");
                    continue;
                }
                if (run != 0) throw CorruptStream("invalid AC symbol");
                break;  // EOB
            }
            k += run;
            if (k > 63) throw CorruptStream("AC run overruns block");
            const int v = detail::extend_value(br.read_bits(size), size);
            if (v < kAlphabetMin || v > kAlphabetMax)
                throw CorruptStream("AC coefficient out of range");
            blk[kZigzagToNatural[static_cast<std::size_t>(k)]] = static_cast<std::int16_t>(v);
            ++k;
        }
    };

    detail::scan_walk(
        s, decode_block,
        [&](std::uint32_t n) {
            br.align();
            const std::uint8_t m = br.take_marker();
            if (m != static_cast<std::uint8_t>(0xD0 + (n & 7)))
                throw CorruptStream("restart marker out of sequence");
            pred.fill(0);
        });

    br.align();
    const std::uint8_t m = br.take_marker();
    if (m != 0xD9) throw CorruptStream("expected EOI after scan");
    s.scan_end = br.pos() - 2;
    s.trailer.assign(data.begin() + static_cast<std::ptrdiff_t>(br.pos()), data.end());

    img.structure = std::move(s);
    return img;
}

} // namespace jrepack::jpeg

#endif
