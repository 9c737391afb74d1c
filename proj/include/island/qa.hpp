/**
 * Copyright 2026, the island-lst authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef ISLAND_QA_HPP
#define ISLAND_QA_HPP

#include <cstdint>
#include <set>
#include <vector>

#include "island/grid.hpp"

namespace island {

/// Per-pixel contamination mask: true = cloud / cloud shadow / cirrus.
struct OcclusionMask {
    GridShape shape;
    GeoRef georef;
    std::vector<std::uint8_t> occluded;

    OcclusionMask() = default;
    OcclusionMask(GridShape s, GeoRef g) : shape(s), georef(g) {
        shape.validate();
        georef.validate();
        occluded.assign(s.pixels(), 0);
    }

    bool at(std::size_t row, std::size_t col) const {
        return occluded[row * shape.width + col] != 0;
    }
    void set(std::size_t row, std::size_t col, bool v) {
        occluded[row * shape.width + col] = v ? 1 : 0;
    }
    std::size_t size() const { return occluded.size(); }
};

/// Which QA_PIXEL bits count as contamination. Defaults follow the
/// Landsat 8 Collection 2 layout: dilated cloud is off unless opted in.
struct QaPolicy {
    int fill_bit = 0;
    int dilated_cloud_bit = 1;
    int cirrus_bit = 2;
    int cloud_bit = 3;
    int cloud_shadow_bit = 4;
    bool include_dilated = false;

    std::vector<int> contamination_bits() const {
        std::vector<int> bits{cirrus_bit, cloud_bit, cloud_shadow_bit};
        if (include_dilated) bits.push_back(dilated_cloud_bit);
        return bits;
    }

    void validate(int bitfield_width = 16) const {
        std::set<int> seen;
        auto chk = [&](int b) {
            if (b < 0 || b >= bitfield_width)
                throw GridError("QaPolicy: bit index out of range: " + std::to_string(b));
            if (!seen.insert(b).second)
                throw GridError("QaPolicy: duplicate bit index: " + std::to_string(b));
        };
        chk(fill_bit);
        chk(dilated_cloud_bit);
        chk(cirrus_bit);
        chk(cloud_bit);
        chk(cloud_shadow_bit);
    }
};

inline OcclusionMask decode_qa(const Grid<std::uint16_t>& qa, const QaPolicy& policy) {
    policy.validate();
    OcclusionMask mask(qa.shape, qa.georef);
    std::uint16_t bits = 0;
    for (int b : policy.contamination_bits())
        bits |= static_cast<std::uint16_t>(1u << b);
    for (std::size_t i = 0; i < qa.data.size(); ++i)
        mask.occluded[i] = (qa.data[i] & bits) ? 1 : 0;
    return mask;
}

/// Fraction of occluded pixels over the full H*W grid.
inline double occlusion_factor(const OcclusionMask& mask) {
    std::uint64_t n = 0;
    for (auto v : mask.occluded) n += v ? 1 : 0;
    return static_cast<double>(n) / static_cast<double>(mask.occluded.size());
}

/// Variant that drops fill (invalid-LST) pixels from the denominator.
/// The default theta keeps the full-grid denominator; this is the
/// --crop-to-valid behavior.
inline double occlusion_factor_cropped(const OcclusionMask& mask, const LstGrid& lst) {
    std::uint64_t n = 0, total = 0;
    for (std::size_t i = 0; i < mask.occluded.size(); ++i) {
        if (!lst.valid[i] && !mask.occluded[i]) continue;
        ++total;
        if (mask.occluded[i]) ++n;
    }
    if (total == 0) return 0.0;
    return static_cast<double>(n) / static_cast<double>(total);
}

}  // namespace island

#endif  // ISLAND_QA_HPP
