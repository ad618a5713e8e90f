#ifndef JREPACK_CODERS_RANGE_CODER_HPP
#define JREPACK_CODERS_RANGE_CODER_HPP

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "jrepack/common.hpp"
#include "jrepack/model/tables.hpp"

namespace jrepack::coders {

// Byte-oriented multisymbol range coder, 32-bit state, carries resolved
// through a pending-0xFF cache. Probabilities come in as cumulative
// frequency intervals with a power-of-two total scale. Integer-only in the
// coding loop so encoder and decoder stay in bit-exact lockstep.
inline constexpr std::uint32_t kRangeTop = 1u << 24;

class RangeEncoder {
public:
    explicit RangeEncoder(std::uint32_t total) {
        if (total == 0 || (total & (total - 1)) != 0 || total > kRangeTop)
            throw ConfigError("range coder total must be a power of two <= 2^24");
        shift_ = static_cast<unsigned>(std::countr_zero(total));
    }

    void encode(std::uint32_t cum_low, std::uint32_t freq) {
        const std::uint32_t r = range_ >> shift_;
        low_ += static_cast<std::uint64_t>(r) * cum_low;
        range_ = r * freq;
        while (range_ < kRangeTop) {
            shift_low();
            range_ <<= 8;
        }
    }

    Bytes finish() {
        // Any value inside [low, low + range) resolves the final interval.
        // Round low up to a multiple of 2^24 when that stays inside: the
        // tail bytes become zero and can be trimmed, since the decoder pads
        // up to kFlushAllowance zero bytes past the stream end.
        const std::uint64_t step = 1ull << 24;  // range_ >= kRangeTop
        const std::uint64_t v = (low_ + step - 1) & ~(step - 1);
        if (v < low_ + range_ && v < (1ull << 33)) low_ = v;
        for (int i = 0; i < 5; ++i) shift_low();
        int trimmed = 0;
        while (trimmed < kFlushAllowance && !out_.empty() && out_.back() == 0) {
            out_.pop_back();
            ++trimmed;
        }
        return std::move(out_);
    }

    static constexpr int kFlushAllowance = 4;

    std::size_t bytes_written() const { return out_.size(); }

private:
    void shift_low() {
        if (static_cast<std::uint32_t>(low_) < 0xFF000000u || (low_ >> 32) != 0) {
            const std::uint8_t carry = static_cast<std::uint8_t>(low_ >> 32);
            std::uint8_t b = cache_;
            do {
                out_.push_back(static_cast<std::uint8_t>(b + carry));
                b = 0xFF;
            } while (--cache_size_ != 0);
            cache_ = static_cast<std::uint8_t>(low_ >> 24);
        }
        ++cache_size_;
        low_ = (low_ & 0x00FFFFFFull) << 8;  // the byte above moved into cache_
    }

    Bytes out_;
    std::uint64_t low_ = 0;
    std::uint32_t range_ = 0xFFFFFFFFu;
    std::uint8_t cache_ = 0;
    std::uint64_t cache_size_ = 1;
    unsigned shift_ = 16;
};

class RangeDecoder {
public:
    RangeDecoder(std::span<const std::uint8_t> data, std::uint32_t total) : data_(data) {
        if (total == 0 || (total & (total - 1)) != 0 || total > kRangeTop)
            throw ConfigError("range coder total must be a power of two <= 2^24");
        shift_ = static_cast<unsigned>(std::countr_zero(total));
        total_ = total;
        for (int i = 0; i < 5; ++i) code_ = (code_ << 8) | next_byte();
    }

    // Cumulative value of the next symbol; pass the matching interval to
    // consume() before the next call.
    std::uint32_t decode_target() {
        r_ = range_ >> shift_;
        const std::uint32_t dv = code_ / r_;
        return dv < total_ ? dv : total_ - 1;
    }

    void consume(std::uint32_t cum_low, std::uint32_t freq) {
        code_ -= r_ * cum_low;
        range_ = r_ * freq;
        while (range_ < kRangeTop) {
            code_ = (code_ << 8) | next_byte();
            range_ <<= 8;
        }
    }

private:
    std::uint8_t next_byte() {
        if (pos_ >= data_.size()) {
            // trimmed flush bytes read back as zero, bounded
            if (overrun_ >= RangeEncoder::kFlushAllowance)
                throw CorruptStream("range coder stream truncated");
            ++overrun_;
            return 0;
        }
        return data_[pos_++];
    }

    std::span<const std::uint8_t> data_;
    std::size_t pos_ = 0;
    int overrun_ = 0;
    std::uint32_t code_ = 0;
    std::uint32_t range_ = 0xFFFFFFFFu;
    std::uint32_t r_ = 0;
    std::uint32_t total_ = 0;
    unsigned shift_ = 16;
};

// Batch surface over the incremental coder: symbols with a per-symbol sigma
// level, probabilities taken from the table set.
inline Bytes msac_encode(std::span<const std::int32_t> symbols,
                         std::span<const int> sigma_levels,
                         const model::LaplaceTableSet& tables) {
    if (symbols.size() != sigma_levels.size())
        throw ConfigError("msac_encode: symbol/level count mismatch");
    RangeEncoder enc(tables.total());
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        const std::int32_t s = symbols[i];
        if (!tables.in_alphabet(s)) throw SymbolOutOfAlphabet("msac_encode: symbol out of alphabet");
        const int lev = sigma_levels[i];
        enc.encode(tables.cum_low(lev, s), tables.freq(lev, s));
    }
    return enc.finish();
}

inline std::vector<std::int32_t> msac_decode(std::span<const std::uint8_t> bytes,
                                             std::size_t count,
                                             std::span<const int> sigma_levels,
                                             const model::LaplaceTableSet& tables) {
    if (count != sigma_levels.size())
        throw ConfigError("msac_decode: count/level mismatch");
    RangeDecoder dec(bytes, tables.total());
    std::vector<std::int32_t> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const int lev = sigma_levels[i];
        const std::uint32_t dv = dec.decode_target();
        const int sym = tables.find_symbol(lev, dv);
        dec.consume(tables.cum_low(lev, sym), tables.freq(lev, sym));
        out.push_back(sym);
    }
    return out;
}

} // namespace jrepack::coders

#endif
