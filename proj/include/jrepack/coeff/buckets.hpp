#ifndef JREPACK_COEFF_BUCKETS_HPP
#define JREPACK_COEFF_BUCKETS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "jrepack/coeff/zigzag.hpp"
#include "jrepack/jpeg/types.hpp"

namespace jrepack::coeff {

// The sequence of coefficients occupying one zigzag position across all
// blocks of one component, in raster block order. A view: no copy is made,
// indexing is pointer arithmetic into the component's coefficient store.
class BucketView {
public:
    BucketView() = default;
    BucketView(const jpeg::BlockGrid& grid, int component_index, int bucket_index)
        : grid_(&grid),
          component_(component_index),
          bucket_(bucket_index),
          natural_offset_(kZigzagToNatural[static_cast<std::size_t>(bucket_index)]) {}

    std::int32_t operator[](std::size_t block) const {
        return grid_->coeffs[block * 64 + static_cast<std::size_t>(natural_offset_)];
    }
    std::size_t size() const { return grid_->block_count(); }
    int component_index() const { return component_; }
    int bucket_index() const { return bucket_; }
    int blocks_wide() const { return grid_->blocks_wide; }
    int blocks_high() const { return grid_->blocks_high; }

    std::vector<std::int32_t> to_vector() const {
        std::vector<std::int32_t> v(size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = (*this)[i];
        return v;
    }

private:
    const jpeg::BlockGrid* grid_ = nullptr;
    int component_ = 0;
    int bucket_ = 0;
    int natural_offset_ = 0;
};

// 64 buckets per component, bucket index = zigzag position.
inline std::vector<std::vector<BucketView>> make_buckets(const jpeg::QuantizedImage& img) {
    std::vector<std::vector<BucketView>> out(img.components.size());
    for (std::size_t c = 0; c < img.components.size(); ++c) {
        out[c].reserve(64);
        for (int k = 0; k < 64; ++k)
            out[c].emplace_back(img.components[c], static_cast<int>(c), k);
    }
    return out;
}

// Inverse of bucketing: write a value sequence back into the grid at zigzag
// position k. Values must fit the coefficient store.
inline void scatter_bucket(jpeg::BlockGrid& grid, int bucket_index,
                           std::span<const std::int32_t> values) {
    const std::size_t off = static_cast<std::size_t>(kZigzagToNatural[static_cast<std::size_t>(bucket_index)]);
    for (std::size_t i = 0; i < values.size(); ++i)
        grid.coeffs[i * 64 + off] = static_cast<std::int16_t>(values[i]);
}

// First forward differences over the whole component in raster block order;
// element 0 is kept absolute.
inline std::vector<std::int32_t> delta_dc(std::span<const std::int32_t> dc) {
    std::vector<std::int32_t> out(dc.size());
    std::int32_t prev = 0;
    for (std::size_t i = 0; i < dc.size(); ++i) {
        out[i] = i == 0 ? dc[0] : dc[i] - prev;
        prev = dc[i];
    }
    return out;
}

inline std::vector<std::int32_t> delta_dc(const BucketView& dc_bucket) {
    const std::vector<std::int32_t> vals = dc_bucket.to_vector();
    return delta_dc(std::span<const std::int32_t>(vals));
}

inline std::vector<std::int32_t> inverse_delta_dc(std::span<const std::int32_t> deltas) {
    std::vector<std::int32_t> out(deltas.size());
    std::int64_t acc = 0;
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        acc += deltas[i];
        out[i] = static_cast<std::int32_t>(acc);
    }
    return out;
}

struct NeighborIndices {
    std::optional<std::size_t> west;
    std::optional<std::size_t> north;
    std::optional<std::size_t> north_west;
};

inline NeighborIndices neighbor_indices(std::size_t block_index, int blocks_wide) {
    NeighborIndices n;
    const std::size_t w = static_cast<std::size_t>(blocks_wide);
    const std::size_t col = block_index % w;
    const std::size_t row = block_index / w;
    if (col > 0) n.west = block_index - 1;
    if (row > 0) n.north = block_index - w;
    if (col > 0 && row > 0) n.north_west = block_index - w - 1;
    return n;
}

} // namespace jrepack::coeff

#endif
