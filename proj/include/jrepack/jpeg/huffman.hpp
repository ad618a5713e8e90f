#ifndef JREPACK_JPEG_HUFFMAN_HPP
#define JREPACK_JPEG_HUFFMAN_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "jrepack/common.hpp"
#include "jrepack/jpeg/bitio.hpp"
#include "jrepack/jpeg/types.hpp"

namespace jrepack::jpeg {

// Canonical Huffman decode tables (mincode/maxcode/valptr walk).
class HuffmanDecoder {
public:
    void build(const HuffmanSpec& spec) {
        int code = 0;
        int k = 0;
        for (int l = 1; l <= 16; ++l) {
            const int count = spec.counts[static_cast<std::size_t>(l - 1)];
            if (count > 0) {
                valptr_[l] = k;
                mincode_[l] = code;
                code += count;
                k += count;
                maxcode_[l] = code - 1;
            } else {
                maxcode_[l] = -1;
            }
            if (code > (1 << l)) throw CorruptStream("huffman code space overflow");
            code <<= 1;
        }
        if (static_cast<std::size_t>(k) != spec.symbols.size())
            throw CorruptStream("huffman symbol count mismatch");
        symbols_ = spec.symbols;
        built_ = true;
    }

    bool built() const { return built_; }

    std::uint8_t decode(ScanBitReader& br) const {
        int code = br.read_bit();
        int l = 1;
        while (code > maxcode_[l]) {
            if (++l > 16) throw CorruptStream("invalid huffman code");
            code = (code << 1) | br.read_bit();
        }
        return symbols_[static_cast<std::size_t>(valptr_[l] + (code - mincode_[l]))];
    }

private:
    std::array<int, 17> mincode_{};
    std::array<int, 17> maxcode_{};
    std::array<int, 17> valptr_{};
    std::vector<std::uint8_t> symbols_;
    bool built_ = false;
};

// Symbol -> (code, length) map for re-encoding with the original tables.
class HuffmanEncoder {
public:
    void build(const HuffmanSpec& spec) {
        code_.fill(0);
        len_.fill(0);
        int code = 0;
        std::size_t k = 0;
        for (int l = 1; l <= 16; ++l) {
            for (int i = 0; i < spec.counts[static_cast<std::size_t>(l - 1)]; ++i) {
                const std::uint8_t sym = spec.symbols[k++];
                code_[sym] = static_cast<std::uint16_t>(code);
                len_[sym] = static_cast<std::uint8_t>(l);
                ++code;
            }
            if (code > (1 << l)) throw CorruptStream("huffman code space overflow");
            code <<= 1;
        }
        built_ = true;
    }

    bool built() const { return built_; }
    bool has(std::uint8_t sym) const { return len_[sym] != 0; }

    void put(ScanBitWriter& bw, std::uint8_t sym) const {
        if (!has(sym)) throw EncodingOverflow("symbol not representable by stored huffman table");
        bw.put_bits(code_[sym], len_[sym]);
    }

private:
    std::array<std::uint16_t, 256> code_{};
    std::array<std::uint8_t, 256> len_{};
    bool built_ = false;
};

} // namespace jrepack::jpeg

#endif
