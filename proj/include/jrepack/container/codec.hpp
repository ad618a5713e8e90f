#ifndef JREPACK_CONTAINER_CODEC_HPP
#define JREPACK_CONTAINER_CODEC_HPP

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "jrepack/coders/range_coder.hpp"
#include "jrepack/coders/rlgr.hpp"
#include "jrepack/coeff/buckets.hpp"
#include "jrepack/common.hpp"
#include "jrepack/container/format.hpp"
#include "jrepack/jpeg/decoder.hpp"
#include "jrepack/jpeg/encoder.hpp"
#include "jrepack/model/tables.hpp"
#include "jrepack/predict/predictor.hpp"

namespace jrepack::container {

enum class CoderKind : std::uint8_t { kMsac = 0, kRlgr = 1 };

struct Options {
    predict::PredictorParams params{};
    double zero_threshold = 0.75;  // strict >: a bucket at exactly 75% stays MSAC
    bool sorting = false;
    enum class Force { kNone, kMsac, kRlgr } force = Force::kNone;
};

// Tables are a deterministic function of the format version; both sides
// build them once per process.
inline const model::LaplaceTableSet& default_tables() {
    static const model::LaplaceTableSet tables = model::LaplaceTableSet::build(model::TableConfig{});
    return tables;
}

inline CoderKind select_coder(std::span<const std::int32_t> values, double threshold = 0.75) {
    if (values.empty()) return CoderKind::kMsac;
    std::size_t zeros = 0;
    for (std::int32_t v : values) zeros += v == 0;
    const double frac = static_cast<double>(zeros) / static_cast<double>(values.size());
    return frac > threshold ? CoderKind::kRlgr : CoderKind::kMsac;
}

// Block positions ordered by descending |previous-bucket value|; ties keep
// ascending block index so the decoder rebuilds the identical permutation.
inline std::vector<std::uint32_t> descending_abs_permutation(std::span<const std::int32_t> prev) {
    std::vector<std::uint32_t> perm(prev.size());
    std::iota(perm.begin(), perm.end(), 0u);
    std::stable_sort(perm.begin(), perm.end(), [&](std::uint32_t a, std::uint32_t b) {
        return std::abs(static_cast<std::int64_t>(prev[a])) >
               std::abs(static_cast<std::int64_t>(prev[b]));
    });
    return perm;
}

inline std::vector<std::int32_t> apply_permutation(std::span<const std::int32_t> values,
                                                   std::span<const std::uint32_t> perm) {
    std::vector<std::int32_t> out(values.size());
    for (std::size_t j = 0; j < perm.size(); ++j) out[j] = values[perm[j]];
    return out;
}

inline std::vector<std::int32_t> invert_permutation(std::span<const std::int32_t> permuted,
                                                    std::span<const std::uint32_t> perm) {
    std::vector<std::int32_t> out(permuted.size());
    for (std::size_t j = 0; j < perm.size(); ++j) out[perm[j]] = permuted[j];
    return out;
}

namespace detail {

inline std::optional<double> partner_prev_abs(const std::array<std::uint8_t, 64>& partner_map,
                                              bool cross_bucket, int k, std::size_t i,
                                              const std::vector<std::vector<std::int32_t>>& coded) {
    if (!cross_bucket || i == 0) return std::nullopt;
    const int m = partner_map[static_cast<std::size_t>(k)];
    if (m == k) return std::nullopt;  // sentinel: no partner
    return std::abs(static_cast<double>(coded[static_cast<std::size_t>(m)][i - 1]));
}

inline Bytes header_prefix(const jpeg::JpegStructure& s, const Options& o, bool raw_fallback) {
    Bytes out;
    out.insert(out.end(), kMagic.begin(), kMagic.end());
    out.push_back(kVersion);
    std::uint8_t flags = 0;
    if (raw_fallback) flags |= kFlagRawFallback;
    if (o.params.cross_bucket) flags |= kFlagCrossBucket;
    if (o.sorting) flags |= kFlagSorting;
    if (o.params.variance_mode) flags |= kFlagVarianceMode;
    out.push_back(flags);
    out.push_back(static_cast<std::uint8_t>(s.components.size()));
    put_u32(out, predict::to_q16(o.params.alpha));
    put_u32(out, predict::to_q16(o.params.blend_a));
    put_u32(out, predict::to_q16(o.params.blend_b));
    put_u32(out, predict::to_q16(o.params.gamma));
    put_u32(out, predict::to_q16(o.params.sigma_init));
    put_u32(out, predict::to_q16(o.params.sigma_min));
    put_u32(out, predict::to_q16(o.zero_threshold));
    put_bytes(out, s.pre_scan);
    put_bytes(out, s.trailer);
    return out;
}

inline Bytes encode_fallback(const jpeg::JpegStructure& s, const Bytes& jpeg_bytes,
                             const Options& o) {
    Bytes out = header_prefix(s, o, true);
    const std::span<const std::uint8_t> scan(jpeg_bytes.data() + s.scan_begin,
                                             s.scan_end - s.scan_begin);
    put_bytes(out, scan);
    return out;
}

inline Bytes encode_container(const jpeg::QuantizedImage& img, const Options& o,
                              const model::LaplaceTableSet& tables) {
    const jpeg::JpegStructure& s = img.structure;
    Bytes out = header_prefix(s, o, false);

    for (std::size_t ci = 0; ci < img.components.size(); ++ci) {
        const jpeg::BlockGrid& grid = img.components[ci];
        const std::size_t n = grid.block_count();
        put_varint(out, static_cast<std::uint64_t>(grid.blocks_wide));
        put_varint(out, static_cast<std::uint64_t>(grid.blocks_high));

        // coded-domain values: bucket 0 is delta-coded, the rest verbatim
        std::vector<std::vector<std::int32_t>> coded(64);
        for (int k = 0; k < 64; ++k) {
            coeff::BucketView view(grid, static_cast<int>(ci), k);
            coded[static_cast<std::size_t>(k)] =
                k == 0 ? coeff::delta_dc(view) : view.to_vector();
        }

        std::uint64_t bitmap = 0;
        std::array<CoderKind, 64> kinds{};
        for (int k = 0; k < 64; ++k) {
            CoderKind kind;
            switch (o.force) {
                case Options::Force::kMsac: kind = CoderKind::kMsac; break;
                case Options::Force::kRlgr: kind = CoderKind::kRlgr; break;
                default:
                    kind = select_coder(coded[static_cast<std::size_t>(k)], o.zero_threshold);
            }
            kinds[static_cast<std::size_t>(k)] = kind;
            if (kind == CoderKind::kRlgr) bitmap |= 1ull << k;
        }
        put_u64(out, bitmap);

        std::array<std::uint8_t, 64> partner_map{};
        if (o.params.cross_bucket) {
            partner_map = predict::compute_partner_map(coded);
            pack_partner_map(out, partner_map);
        }

        for (int k = 0; k < 64; ++k) {
            const auto& vals = coded[static_cast<std::size_t>(k)];
            Bytes payload;
            if (kinds[static_cast<std::size_t>(k)] == CoderKind::kRlgr) {
                if (o.sorting && k >= 1) {
                    coeff::BucketView prev(grid, static_cast<int>(ci), k - 1);
                    const auto perm = descending_abs_permutation(prev.to_vector());
                    payload = coders::rlrg_encode(apply_permutation(vals, perm));
                } else {
                    payload = coders::rlrg_encode(vals);
                }
            } else {
                coders::RangeEncoder enc(tables.total());
                predict::SigmaPredictor pred(o.params, grid.blocks_wide, n);
                for (std::size_t i = 0; i < n; ++i) {
                    const double sigma = pred.predict(
                        i, vals, partner_prev_abs(partner_map, o.params.cross_bucket, k, i, coded));
                    const int lev = tables.quantize_sigma(sigma);
                    const std::int32_t sym = vals[i];
                    if (!tables.in_alphabet(sym))
                        throw SymbolOutOfAlphabet("coefficient outside coding alphabet");
                    enc.encode(tables.cum_low(lev, sym), tables.freq(lev, sym));
                }
                payload = enc.finish();
            }
            put_bytes(out, payload);
        }
    }
    return out;
}

} // namespace detail

inline Bytes decompress(const Bytes& container) {
    const std::span<const std::uint8_t> data(container.data(), container.size());
    std::size_t pos = 0;
    if (data.size() < 6 || !std::equal(kMagic.begin(), kMagic.end(), data.begin()))
        throw CorruptContainer("bad container magic");
    pos = 4;
    if (data[pos++] != kVersion) throw VersionMismatch("unsupported container version");
    const std::uint8_t flags = data[pos++];
    if (pos >= data.size()) throw CorruptContainer("truncated header");
    const int ncomp = data[pos++];

    predict::PredictorParams params;
    params.alpha = predict::from_q16(get_u32(data, pos));
    params.blend_a = predict::from_q16(get_u32(data, pos));
    params.blend_b = predict::from_q16(get_u32(data, pos));
    params.gamma = predict::from_q16(get_u32(data, pos));
    params.sigma_init = predict::from_q16(get_u32(data, pos));
    params.sigma_min = predict::from_q16(get_u32(data, pos));
    get_u32(data, pos);  // zero threshold, informational: the bitmap decides
    params.variance_mode = (flags & kFlagVarianceMode) != 0;
    params.cross_bucket = (flags & kFlagCrossBucket) != 0;
    const bool sorting = (flags & kFlagSorting) != 0;

    const auto pre_scan_span = get_bytes(data, pos);
    const auto trailer_span = get_bytes(data, pos);
    const Bytes pre_scan(pre_scan_span.begin(), pre_scan_span.end());

    jpeg::JpegStructure structure;
    try {
        structure = jpeg::parse_headers(pre_scan);
    } catch (const Error&) {
        throw CorruptContainer("preserved JPEG header does not parse");
    }
    if (structure.scan_begin != pre_scan.size())
        throw CorruptContainer("preserved header has trailing bytes");
    if (static_cast<int>(structure.components.size()) != ncomp)
        throw CorruptContainer("component count mismatch");
    structure.trailer.assign(trailer_span.begin(), trailer_span.end());

    if (flags & kFlagRawFallback) {
        const auto scan = get_bytes(data, pos);
        if (pos != data.size()) throw CorruptContainer("trailing bytes after raw scan");
        Bytes out = pre_scan;
        out.insert(out.end(), scan.begin(), scan.end());
        out.push_back(0xFF);
        out.push_back(0xD9);
        out.insert(out.end(), trailer_span.begin(), trailer_span.end());
        return out;
    }

    const model::LaplaceTableSet& tables = default_tables();
    jpeg::QuantizedImage img;
    img.structure = structure;
    img.components.resize(structure.components.size());

    try {
        for (std::size_t ci = 0; ci < img.components.size(); ++ci) {
            jpeg::BlockGrid& grid = img.components[ci];
            const std::uint64_t bw = get_varint(data, pos);
            const std::uint64_t bh = get_varint(data, pos);
            if (bw != static_cast<std::uint64_t>(structure.blocks_wide(static_cast<int>(ci))) ||
                bh != static_cast<std::uint64_t>(structure.blocks_high(static_cast<int>(ci))))
                throw CorruptContainer("grid dimensions disagree with frame header");
            grid.blocks_wide = static_cast<int>(bw);
            grid.blocks_high = static_cast<int>(bh);
            grid.coeffs.assign(grid.block_count() * 64, 0);
            const std::size_t n = grid.block_count();

            const std::uint64_t bitmap = get_u64(data, pos);
            std::array<std::uint8_t, 64> partner_map{};
            if (params.cross_bucket) {
                partner_map = unpack_partner_map(data, pos);
                for (int k = 0; k < 64; ++k)
                    if (partner_map[static_cast<std::size_t>(k)] > k)
                        throw CorruptContainer("partner map references a later bucket");
            }

            std::vector<std::vector<std::int32_t>> coded(64);
            for (int k = 0; k < 64; ++k) {
                const auto payload = get_bytes(data, pos);
                std::vector<std::int32_t> vals;
                if (bitmap & (1ull << k)) {
                    vals = coders::rlrg_decode(payload, n);
                    if (sorting && k >= 1) {
                        coeff::BucketView prev(grid, static_cast<int>(ci), k - 1);
                        const auto perm = descending_abs_permutation(prev.to_vector());
                        vals = invert_permutation(vals, perm);
                    }
                } else {
                    coders::RangeDecoder dec(payload, tables.total());
                    predict::SigmaPredictor pred(params, grid.blocks_wide, n);
                    vals.resize(n);
                    for (std::size_t i = 0; i < n; ++i) {
                        const double sigma = pred.predict(
                            i, vals,
                            detail::partner_prev_abs(partner_map, params.cross_bucket, k, i, coded));
                        const int lev = tables.quantize_sigma(sigma);
                        const std::uint32_t dv = dec.decode_target();
                        const int sym = tables.find_symbol(lev, dv);
                        dec.consume(tables.cum_low(lev, sym), tables.freq(lev, sym));
                        vals[i] = sym;
                    }
                }
                coded[static_cast<std::size_t>(k)] = vals;
                if (k == 0) {
                    const auto absolute = coeff::inverse_delta_dc(vals);
                    for (std::int32_t v : absolute)
                        if (v < kAlphabetMin || v > kAlphabetMax)
                            throw CorruptContainer("DC values out of range");
                    coeff::scatter_bucket(grid, 0, absolute);
                } else {
                    coeff::scatter_bucket(grid, k, vals);
                }
            }
        }
        if (pos != data.size()) throw CorruptContainer("trailing bytes in container");
    } catch (const CorruptContainer&) {
        throw;
    } catch (const Error& e) {
        throw CorruptContainer(std::string("payload decode failed: ") + e.what());
    }

    try {
        return jpeg::serialize_jpeg(img);
    } catch (const Error& e) {
        throw CorruptContainer(std::string("scan re-encoding failed: ") + e.what());
    }
}

// Full pipeline with the encoder-side self check: the produced container is
// decompressed in memory and must reproduce the input byte-for-byte,
// otherwise the raw-scan fallback is emitted. The fallback also wins when it
// is smaller (tiny or pathological inputs), keeping the size bound
// output <= input + header overhead unconditional.
inline Bytes compress(const Bytes& jpeg_bytes, const Options& opts = {}) {
    jpeg::QuantizedImage img = jpeg::parse_jpeg(jpeg_bytes);

    Options o = opts;
    o.params = o.params.canonicalized();
    o.params.validate();
    o.zero_threshold = predict::from_q16(predict::to_q16(o.zero_threshold));

    const Bytes fallback = detail::encode_fallback(img.structure, jpeg_bytes, o);

    Bytes container;
    bool use_fallback = false;
    try {
        container = detail::encode_container(img, o, default_tables());
        if (container.size() >= fallback.size()) {
            use_fallback = true;
        } else {
            const Bytes check = decompress(container);
            if (check != jpeg_bytes) use_fallback = true;
        }
    } catch (const SymbolOutOfAlphabet&) {
        use_fallback = true;
    } catch (const EncodingOverflow&) {
        use_fallback = true;
    } catch (const CorruptContainer&) {
        use_fallback = true;  // self-check decode failed; never escapes
    }
    return use_fallback ? fallback : container;
}

} // namespace jrepack::container

#endif
