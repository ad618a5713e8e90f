#ifndef JREPACK_JPEG_BITIO_HPP
#define JREPACK_JPEG_BITIO_HPP

#include <cstdint>

#include "jrepack/common.hpp"

namespace jrepack::jpeg {

// MSB-first bit reader over the entropy-coded segment. 0xFF 0x00 unstuffs to
// a literal 0xFF data byte; any other 0xFF sequence is a marker and must be
// taken explicitly via take_marker().
class ScanBitReader {
public:
    ScanBitReader(const Bytes& data, std::size_t begin, std::size_t end)
        : data_(data.data()), pos_(begin), end_(end) {}

    int read_bit() {
        if (bit_count_ == 0) fill();
        --bit_count_;
        return (bit_buf_ >> bit_count_) & 1;
    }

    std::uint32_t read_bits(int n) {
        std::uint32_t v = 0;
        for (; n > 0; --n) v = (v << 1) | static_cast<std::uint32_t>(read_bit());
        return v;
    }

    // Drop the remaining bits of the current byte (restart/EOI padding).
    void align() { bit_count_ = 0; }

    // Consume optional 0xFF fill bytes followed by a two-byte marker and
    // return its second byte. Must be byte-aligned.
    std::uint8_t take_marker() {
        bit_count_ = 0;
        std::size_t p = pos_;
        if (p >= end_ || data_[p] != 0xFF) throw CorruptStream("expected marker in scan");
        while (p + 1 < end_ && data_[p + 1] == 0xFF) ++p;
        if (p + 1 >= end_) throw CorruptStream("truncated marker in scan");
        pos_ = p + 2;
        return data_[p + 1];
    }

    // Byte offset of the next unread byte.
    std::size_t pos() const { return pos_; }

private:
    void fill() {
        if (pos_ >= end_) throw CorruptStream("entropy-coded segment truncated");
        const std::uint8_t b = data_[pos_];
        if (b == 0xFF) {
            if (pos_ + 1 >= end_) throw CorruptStream("entropy-coded segment truncated at 0xFF");
            if (data_[pos_ + 1] == 0x00) {
                pos_ += 2;
                bit_buf_ = 0xFF;
                bit_count_ = 8;
                return;
            }
            throw CorruptStream("marker encountered inside entropy-coded data");
        }
        ++pos_;
        bit_buf_ = b;
        bit_count_ = 8;
    }

    const std::uint8_t* data_;
    std::size_t pos_;
    std::size_t end_;
    std::uint32_t bit_buf_ = 0;
    int bit_count_ = 0;
};

// MSB-first bit writer with 0xFF byte stuffing. Markers are emitted raw
// after padding the current byte with 1-bits.
class ScanBitWriter {
public:
    explicit ScanBitWriter(Bytes& out) : out_(out) {}

    void put_bit(int b) {
        cur_ = static_cast<std::uint8_t>((cur_ << 1) | (b & 1));
        if (++nbits_ == 8) {
            emit(cur_);
            cur_ = 0;
            nbits_ = 0;
        }
    }

    void put_bits(std::uint32_t v, int n) {
        for (int i = n - 1; i >= 0; --i) put_bit(static_cast<int>((v >> i) & 1));
    }

    void pad_align() {
        while (nbits_ != 0) put_bit(1);
    }

    void marker(std::uint8_t m) {
        pad_align();
        out_.push_back(0xFF);
        out_.push_back(m);
    }

private:
    void emit(std::uint8_t b) {
        out_.push_back(b);
        if (b == 0xFF) out_.push_back(0x00);
    }

    Bytes& out_;
    std::uint8_t cur_ = 0;
    int nbits_ = 0;
};

} // namespace jrepack::jpeg

#endif
