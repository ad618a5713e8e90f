#ifndef JREPACK_CONTAINER_FORMAT_HPP
#define JREPACK_CONTAINER_FORMAT_HPP

#include <array>
#include <cstdint>
#include <span>

#include "jrepack/common.hpp"

namespace jrepack::container {

// Byte layout is normative in FORMAT.md; version 1 also pins the probability
// table construction and the RLGR adaptation constants.
inline constexpr std::array<std::uint8_t, 4> kMagic = {'J', 'R', 'P', 'K'};
inline constexpr std::uint8_t kVersion = 1;

enum ContainerFlags : std::uint8_t {
    kFlagRawFallback = 0x01,
    kFlagCrossBucket = 0x02,
    kFlagSorting = 0x04,
    kFlagVarianceMode = 0x08,
};

inline void put_varint(Bytes& out, std::uint64_t v) {
    while (v >= 0x80) {
        out.push_back(static_cast<std::uint8_t>(v) | 0x80);
        v >>= 7;
    }
    out.push_back(static_cast<std::uint8_t>(v));
}

inline std::uint64_t get_varint(std::span<const std::uint8_t> data, std::size_t& pos) {
    std::uint64_t v = 0;
    int shift = 0;
    while (true) {
        if (pos >= data.size()) throw CorruptContainer("truncated varint");
        const std::uint8_t b = data[pos++];
        if (shift >= 63 && (b & 0x7F) > 1) throw CorruptContainer("varint overflow");
        v |= static_cast<std::uint64_t>(b & 0x7F) << shift;
        if ((b & 0x80) == 0) return v;
        shift += 7;
    }
}

inline void put_u32(Bytes& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

inline std::uint32_t get_u32(std::span<const std::uint8_t> data, std::size_t& pos) {
    if (pos + 4 > data.size()) throw CorruptContainer("truncated field");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(data[pos++]) << (8 * i);
    return v;
}

inline void put_u64(Bytes& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

inline std::uint64_t get_u64(std::span<const std::uint8_t> data, std::size_t& pos) {
    if (pos + 8 > data.size()) throw CorruptContainer("truncated field");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(data[pos++]) << (8 * i);
    return v;
}

inline void put_bytes(Bytes& out, std::span<const std::uint8_t> b) {
    put_varint(out, b.size());
    out.insert(out.end(), b.begin(), b.end());
}

inline std::span<const std::uint8_t> get_bytes(std::span<const std::uint8_t> data, std::size_t& pos) {
    const std::uint64_t len = get_varint(data, pos);
    if (len > data.size() - pos) throw CorruptContainer("byte field overruns container");
    const auto span = data.subspan(pos, static_cast<std::size_t>(len));
    pos += static_cast<std::size_t>(len);
    return span;
}

// 64 x 6-bit partner entries packed LSB-first into 48 bytes.
inline void pack_partner_map(Bytes& out, const std::array<std::uint8_t, 64>& map) {
    std::array<std::uint8_t, 48> packed{};
    for (int k = 0; k < 64; ++k) {
        const int bit = k * 6;
        const std::uint16_t v = static_cast<std::uint16_t>(map[static_cast<std::size_t>(k)] & 0x3F)
                                << (bit % 8);
        packed[static_cast<std::size_t>(bit / 8)] |= static_cast<std::uint8_t>(v);
        if (bit % 8 > 2)
            packed[static_cast<std::size_t>(bit / 8) + 1] |= static_cast<std::uint8_t>(v >> 8);
    }
    out.insert(out.end(), packed.begin(), packed.end());
}

inline std::array<std::uint8_t, 64> unpack_partner_map(std::span<const std::uint8_t> data,
                                                       std::size_t& pos) {
    if (pos + 48 > data.size()) throw CorruptContainer("truncated partner map");
    std::array<std::uint8_t, 64> map{};
    for (int k = 0; k < 64; ++k) {
        const int bit = k * 6;
        std::uint16_t v = data[pos + static_cast<std::size_t>(bit / 8)];
        if (bit % 8 > 2) v |= static_cast<std::uint16_t>(data[pos + static_cast<std::size_t>(bit / 8) + 1]) << 8;
        map[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>((v >> (bit % 8)) & 0x3F);
    }
    pos += 48;
    return map;
}

} // namespace jrepack::container

#endif
