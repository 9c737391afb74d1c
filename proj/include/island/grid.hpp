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
#ifndef ISLAND_GRID_HPP
#define ISLAND_GRID_HPP

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace island {

/// Thrown for violated preconditions, misaligned inputs, bad files.
class GridError : public std::runtime_error {
  public:
    explicit GridError(const std::string& msg) : std::runtime_error(msg) {}
};

struct GridShape {
    std::size_t height = 0;
    std::size_t width = 0;

    std::size_t pixels() const { return height * width; }
    bool operator==(const GridShape&) const = default;

    void validate() const {
        if (height < 1 || width < 1)
            throw GridError("GridShape: height and width must be >= 1");
    }
};

/// Georeferencing of a north-up grid: map coordinates of the top-left
/// corner of pixel (0,0), pixel size in map units, and a CRS identifier
/// (typically "EPSG:nnnn"). Two grids are aligned iff GeoRef and
/// GridShape compare equal; no resampling is ever performed.
struct GeoRef {
    double origin_x = 0.0;
    double origin_y = 0.0;
    double pixel_size_x = 1.0;
    double pixel_size_y = 1.0;
    std::string crs_id;

    bool operator==(const GeoRef&) const = default;

    void validate() const {
        if (pixel_size_x == 0.0 || pixel_size_y == 0.0)
            throw GridError("GeoRef: pixel_size components must be nonzero");
    }
};

/// Row-major 2-D array with georeferencing.
template <typename T>
struct Grid {
    GridShape shape;
    GeoRef georef;
    std::vector<T> data;

    Grid() = default;
    Grid(GridShape s, GeoRef g, T fill = T{})
        : shape(s), georef(g), data(s.pixels(), fill) {
        shape.validate();
        georef.validate();
    }

    T& at(std::size_t row, std::size_t col) { return data[row * shape.width + col]; }
    const T& at(std::size_t row, std::size_t col) const {
        return data[row * shape.width + col];
    }
    std::size_t size() const { return data.size(); }
};

inline constexpr float kLstNodata = -9999.0f;
inline constexpr float kLstMinKelvin = 150.0f;
inline constexpr float kLstMaxKelvin = 400.0f;

/// Land surface temperature raster in kelvin. Invalid pixels carry the
/// nodata sentinel and are excluded from every statistic.
struct LstGrid {
    GridShape shape;
    GeoRef georef;
    std::vector<float> values;
    std::vector<std::uint8_t> valid;

    LstGrid() = default;
    LstGrid(GridShape s, GeoRef g) : shape(s), georef(g) {
        shape.validate();
        georef.validate();
        values.assign(s.pixels(), kLstNodata);
        valid.assign(s.pixels(), 0);
    }

    float at(std::size_t row, std::size_t col) const {
        return values[row * shape.width + col];
    }
    bool is_valid(std::size_t row, std::size_t col) const {
        return valid[row * shape.width + col] != 0;
    }
    void set(std::size_t row, std::size_t col, float kelvin) {
        values[row * shape.width + col] = kelvin;
        valid[row * shape.width + col] = 1;
    }
    void set_invalid(std::size_t row, std::size_t col) {
        values[row * shape.width + col] = kLstNodata;
        valid[row * shape.width + col] = 0;
    }
    std::size_t size() const { return values.size(); }

    void check_range() const {
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (!valid[i]) continue;
            const float v = values[i];
            if (!std::isfinite(v) || v < kLstMinKelvin || v > kLstMaxKelvin)
                throw GridError("LstGrid: valid pixel " + std::to_string(i) +
                                " out of range: " + std::to_string(v));
        }
    }
};

/// Categorical land-cover raster. Codes are opaque labels (e.g. NLCD
/// 11-95); code equality defines the class-match predicate.
struct LandCoverGrid {
    GridShape shape;
    GeoRef georef;
    std::vector<std::uint16_t> classes;
    std::map<std::uint16_t, std::string> legend;

    LandCoverGrid() = default;
    LandCoverGrid(GridShape s, GeoRef g, std::uint16_t fill = 0)
        : shape(s), georef(g), classes(s.pixels(), fill) {
        shape.validate();
        georef.validate();
    }

    std::uint16_t at(std::size_t row, std::size_t col) const {
        return classes[row * shape.width + col];
    }
    std::uint16_t& at(std::size_t row, std::size_t col) {
        return classes[row * shape.width + col];
    }
    std::size_t size() const { return classes.size(); }
};

namespace detail {

template <typename G>
inline GridShape shape_of(const G& g) { return g.shape; }
template <typename G>
inline const GeoRef& georef_of(const G& g) { return g.georef; }

struct GridRef {
    std::string name;
    GridShape shape;
    GeoRef georef;
};

}  // namespace detail

/// Fails with an error naming the first grid whose shape or GeoRef
/// differs from the first entry's.
inline void check_aligned(const std::vector<detail::GridRef>& grids) {
    if (grids.size() < 2)
        throw GridError("check_aligned: need at least two grids");
    const auto& ref = grids.front();
    for (std::size_t i = 1; i < grids.size(); ++i) {
        const auto& g = grids[i];
        if (!(g.shape == ref.shape))
            throw GridError("misaligned grid '" + g.name + "': shape " +
                            std::to_string(g.shape.height) + "x" +
                            std::to_string(g.shape.width) + " vs reference " +
                            std::to_string(ref.shape.height) + "x" +
                            std::to_string(ref.shape.width));
        if (!(g.georef == ref.georef))
            throw GridError("misaligned grid '" + g.name +
                            "': georeferencing differs from reference '" +
                            ref.name + "'");
    }
}

template <typename... Gs>
inline void check_aligned_named(const std::vector<std::string>& names, const Gs&... gs) {
    std::vector<detail::GridRef> refs;
    std::size_t i = 0;
    (refs.push_back({i < names.size() ? names[i++] : "grid", detail::shape_of(gs),
                     detail::georef_of(gs)}),
     ...);
    check_aligned(refs);
}

}  // namespace island

#endif  // ISLAND_GRID_HPP
