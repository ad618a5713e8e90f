#ifndef JREPACK_CODERS_RLGR_HPP
#define JREPACK_CODERS_RLGR_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "jrepack/common.hpp"

namespace jrepack::coders {

// Adaptive Run-Length / Golomb-Rice coder. Signed input is first mapped to
// non-negative integers (0 -> 0, -1 -> 1, 1 -> 2, -2 -> 3, ...), then coded
// in two modes driven by the scaled run parameter kP:
//   run mode (kP >> L > 0): a full run of 2^k zeros is one 0-bit; a partial
//     run is a 1-bit, k bits of run length, and the GR code of (value - 1);
//   no-run mode (k == 0): each value is GR-coded directly.
// Both parameters adapt backward after every coded event, so the decoder
// replays the adaptation exactly. Constants use L = 4 fractional bits and
// are frozen by golden tests.
namespace rlgr {
inline constexpr int kL = 4;               // fractional bits of kP / kRP
inline constexpr int kPInit = 1 << kL;     // k starts at 1
inline constexpr int kRPInit = 1 << kL;    // kR starts at 1
inline constexpr int kPMax = 160;          // k <= 10, runs <= 1024
inline constexpr int kRPMax = 160;         // kR <= 10
inline constexpr int kUpRun = 8;           // after a complete zero run
inline constexpr int kDnRun = 12;          // after a partial run
inline constexpr int kUpQ = 6;             // no-run mode, value == 0
inline constexpr int kDnQ = 6;             // no-run mode, value != 0
inline constexpr int kRPDown = 4;          // GR quotient == 0
inline constexpr unsigned kMaxQuotient = 1u << 14;  // corrupt-stream guard
inline constexpr int kTailAllowance = 8;   // trailing zero bytes trimmed/padded
} // namespace rlgr

inline std::uint32_t interleave_signed(std::int32_t v) {
    return v > 0 ? static_cast<std::uint32_t>(v) * 2
                 : static_cast<std::uint32_t>(-static_cast<std::int64_t>(v)) * 2 -
                       (v < 0 ? 1 : 0);
}

inline std::int32_t deinterleave_signed(std::uint32_t u) {
    if ((u & 1) == 0) return static_cast<std::int32_t>(u / 2);
    return -static_cast<std::int32_t>((u + 1) / 2);
}

class MsbBitWriter {
public:
    void put_bit(int b) {
        cur_ = static_cast<std::uint8_t>((cur_ << 1) | (b & 1));
        if (++nbits_ == 8) {
            out_.push_back(cur_);
            cur_ = 0;
            nbits_ = 0;
        }
    }
    void put_bits(std::uint32_t v, int n) {
        for (int i = n - 1; i >= 0; --i) put_bit(static_cast<int>((v >> i) & 1));
    }
    Bytes finish() {
        if (nbits_ != 0) out_.push_back(static_cast<std::uint8_t>(cur_ << (8 - nbits_)));
        int trimmed = 0;
        while (trimmed < rlgr::kTailAllowance && !out_.empty() && out_.back() == 0) {
            out_.pop_back();
            ++trimmed;
        }
        return std::move(out_);
    }
    std::size_t size_bits() const { return out_.size() * 8 + static_cast<std::size_t>(nbits_); }

private:
    Bytes out_;
    std::uint8_t cur_ = 0;
    int nbits_ = 0;
};

class MsbBitReader {
public:
    explicit MsbBitReader(std::span<const std::uint8_t> data) : data_(data) {}
    int read_bit() {
        if (nbits_ == 0) {
            if (pos_ >= data_.size()) {
                if (overrun_ >= rlgr::kTailAllowance)
                    throw CorruptStream("bit stream truncated");
                ++overrun_;
                cur_ = 0;
            } else {
                cur_ = data_[pos_++];
            }
            nbits_ = 8;
        }
        --nbits_;
        return (cur_ >> nbits_) & 1;
    }
    std::uint32_t read_bits(int n) {
        std::uint32_t v = 0;
        for (; n > 0; --n) v = (v << 1) | static_cast<std::uint32_t>(read_bit());
        return v;
    }

private:
    std::span<const std::uint8_t> data_;
    std::size_t pos_ = 0;
    std::uint8_t cur_ = 0;
    int nbits_ = 0;
    int overrun_ = 0;
};

namespace detail {

struct RlgrState {
    int kp = rlgr::kPInit;
    int krp = rlgr::kRPInit;
};

inline void gr_encode(MsbBitWriter& w, RlgrState& st, std::uint32_t v) {
    const int kr = st.krp >> rlgr::kL;
    const std::uint32_t q = v >> kr;
    for (std::uint32_t i = 0; i < q; ++i) w.put_bit(1);
    w.put_bit(0);
    if (kr > 0) w.put_bits(v & ((1u << kr) - 1), kr);
    if (q == 0) {
        st.krp = st.krp > rlgr::kRPDown ? st.krp - rlgr::kRPDown : 0;
    } else if (q > 1) {
        st.krp += 2 * static_cast<int>(q);
        if (st.krp > rlgr::kRPMax) st.krp = rlgr::kRPMax;
    }
}

inline std::uint32_t gr_decode(MsbBitReader& r, RlgrState& st) {
    const int kr = st.krp >> rlgr::kL;
    std::uint32_t q = 0;
    while (r.read_bit() == 1) {
        if (++q > rlgr::kMaxQuotient) throw CorruptStream("rlgr quotient overrun");
    }
    std::uint32_t v = q << kr;
    if (kr > 0) v |= r.read_bits(kr);
    if (q == 0) {
        st.krp = st.krp > rlgr::kRPDown ? st.krp - rlgr::kRPDown : 0;
    } else if (q > 1) {
        st.krp += 2 * static_cast<int>(q);
        if (st.krp > rlgr::kRPMax) st.krp = rlgr::kRPMax;
    }
    return v;
}

} // namespace detail

inline Bytes rlrg_encode(std::span<const std::int32_t> symbols) {
    for (std::int32_t v : symbols)
        if (v < kAlphabetMin || v > kAlphabetMax)
            throw SymbolOutOfAlphabet("rlrg_encode: symbol out of alphabet");

    MsbBitWriter w;
    detail::RlgrState st;
    const std::size_t n = symbols.size();
    std::size_t pos = 0;
    while (pos < n) {
        const int k = st.kp >> rlgr::kL;
        if (k > 0) {
            std::size_t z = 0;
            while (pos + z < n && symbols[pos + z] == 0) ++z;
            const std::size_t runmax = static_cast<std::size_t>(1) << k;
            if (z >= runmax) {
                w.put_bit(0);
                st.kp = st.kp + rlgr::kUpRun > rlgr::kPMax ? rlgr::kPMax : st.kp + rlgr::kUpRun;
                pos += runmax;
            } else if (pos + z == n) {
                // input ends inside a zero run; assert one more full run and
                // let the decoder clamp to the known symbol count
                w.put_bit(0);
                st.kp = st.kp + rlgr::kUpRun > rlgr::kPMax ? rlgr::kPMax : st.kp + rlgr::kUpRun;
                pos = n;
            } else {
                w.put_bit(1);
                w.put_bits(static_cast<std::uint32_t>(z), k);
                const std::uint32_t u = interleave_signed(symbols[pos + z]);  // u >= 1
                detail::gr_encode(w, st, u - 1);
                st.kp = st.kp > rlgr::kDnRun ? st.kp - rlgr::kDnRun : 0;
                pos += z + 1;
            }
        } else {
            const std::uint32_t u = interleave_signed(symbols[pos]);
            detail::gr_encode(w, st, u);
            if (u == 0) {
                st.kp = st.kp + rlgr::kUpQ > rlgr::kPMax ? rlgr::kPMax : st.kp + rlgr::kUpQ;
            } else {
                st.kp = st.kp > rlgr::kDnQ ? st.kp - rlgr::kDnQ : 0;
            }
            ++pos;
        }
    }
    return w.finish();
}

inline std::vector<std::int32_t> rlrg_decode(std::span<const std::uint8_t> bytes, std::size_t count) {
    MsbBitReader r(bytes);
    detail::RlgrState st;
    std::vector<std::int32_t> out;
    out.reserve(count);
    auto push_value = [&out](std::uint32_t u) {
        const std::int32_t v = deinterleave_signed(u);
        if (v < kAlphabetMin || v > kAlphabetMax)
            throw CorruptStream("rlrg_decode: value out of alphabet");
        out.push_back(v);
    };
    while (out.size() < count) {
        const int k = st.kp >> rlgr::kL;
        if (k > 0) {
            if (r.read_bit() == 0) {
                const std::size_t runmax = static_cast<std::size_t>(1) << k;
                const std::size_t run = runmax < count - out.size() ? runmax : count - out.size();
                out.insert(out.end(), run, 0);
                st.kp = st.kp + rlgr::kUpRun > rlgr::kPMax ? rlgr::kPMax : st.kp + rlgr::kUpRun;
            } else {
                const std::uint32_t z = r.read_bits(k);
                if (out.size() + z + 1 > count) throw CorruptStream("rlrg_decode: run past end");
                out.insert(out.end(), z, 0);
                push_value(detail::gr_decode(r, st) + 1);
                st.kp = st.kp > rlgr::kDnRun ? st.kp - rlgr::kDnRun : 0;
            }
        } else {
            const std::uint32_t u = detail::gr_decode(r, st);
            push_value(u);
            if (u == 0) {
                st.kp = st.kp + rlgr::kUpQ > rlgr::kPMax ? rlgr::kPMax : st.kp + rlgr::kUpQ;
            } else {
                st.kp = st.kp > rlgr::kDnQ ? st.kp - rlgr::kDnQ : 0;
            }
        }
    }
    return out;
}

} // namespace jrepack::coders

#endif
