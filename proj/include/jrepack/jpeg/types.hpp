#ifndef JREPACK_JPEG_TYPES_HPP
#define JREPACK_JPEG_TYPES_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "jrepack/common.hpp"

namespace jrepack::jpeg {

// Raw DHT payload for one table, kept exactly as parsed so the scan can be
// re-encoded with the original code assignment.
struct HuffmanSpec {
    std::array<std::uint8_t, 16> counts{};  // codes per length 1..16
    std::vector<std::uint8_t> symbols;
    bool defined = false;
};

struct ComponentSpec {
    std::uint8_t id = 0;
    std::uint8_t h = 1, v = 1;  // sampling factors
    std::uint8_t quant_id = 0;
    std::uint8_t dc_table = 0, ac_table = 0;  // selectors from the SOS header
};

struct FrameInfo {
    int width = 0;
    int height = 0;
    int precision = 0;
    int component_count = 0;
};

struct JpegStructure {
    Bytes pre_scan;   // SOI through the end of the SOS header, verbatim
    Bytes trailer;    // everything after EOI, verbatim
    std::size_t scan_begin = 0;  // offsets of the entropy-coded segment
    std::size_t scan_end = 0;    // in the source bytes (end excludes EOI)
    std::uint32_t restart_interval = 0;  // in MCUs, 0 = no restart markers
    FrameInfo frame;
    std::vector<ComponentSpec> components;      // frame order
    std::vector<int> scan_order;                // component indices in SOS order
    std::array<HuffmanSpec, 4> dc_tables;
    std::array<HuffmanSpec, 4> ac_tables;

    int h_max() const {
        int m = 1;
        for (const auto& c : components) m = c.h > m ? c.h : m;
        return m;
    }
    int v_max() const {
        int m = 1;
        for (const auto& c : components) m = c.v > m ? c.v : m;
        return m;
    }
    // MCU grid of the interleaved scan. For a single-component scan the MCU
    // is one block and these are the component's own block dimensions.
    int mcus_x() const {
        if (components.size() == 1) return (frame.width + 7) / 8;
        return (frame.width + 8 * h_max() - 1) / (8 * h_max());
    }
    int mcus_y() const {
        if (components.size() == 1) return (frame.height + 7) / 8;
        return (frame.height + 8 * v_max() - 1) / (8 * v_max());
    }
    int blocks_wide(int ci) const {
        if (components.size() == 1) return mcus_x();
        return mcus_x() * components[ci].h;
    }
    int blocks_high(int ci) const {
        if (components.size() == 1) return mcus_y();
        return mcus_y() * components[ci].v;
    }
};

// One component's quantized coefficients: blocks in raster order, 64 values
// per block in natural (row-major) order. DC values are absolute.
struct BlockGrid {
    int blocks_wide = 0;
    int blocks_high = 0;
    std::vector<std::int16_t> coeffs;

    std::size_t block_count() const {
        return static_cast<std::size_t>(blocks_wide) * static_cast<std::size_t>(blocks_high);
    }
    std::int16_t* block(std::size_t i) { return coeffs.data() + i * 64; }
    const std::int16_t* block(std::size_t i) const { return coeffs.data() + i * 64; }
};

struct QuantizedImage {
    JpegStructure structure;
    std::vector<BlockGrid> components;
};

} // namespace jrepack::jpeg

#endif
