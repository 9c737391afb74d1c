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
#ifndef ISLAND_TESTS_HELPERS_HPP
#define ISLAND_TESTS_HELPERS_HPP

// Test-only scene builders and independent oracles. The oracles are
// direct per-pixel evaluations, deliberately sharing no code with the
// filtering implementation they check.

#include <cmath>
#include <random>

#include "island/island.hpp"

namespace testutil {

inline island::GeoRef georef() {
    island::GeoRef g;
    g.origin_x = 500000.0;
    g.origin_y = 4100000.0;
    g.pixel_size_x = 30.0;
    g.pixel_size_y = 30.0;
    g.crs_id = "EPSG:32614";
    return g;
}

/// Land cover split into vertical class bands.
inline island::LandCoverGrid banded_land(island::GridShape shape, int n_classes,
                                         island::GeoRef g = georef()) {
    island::LandCoverGrid land(shape, g);
    const std::size_t band = (shape.width + n_classes - 1) / n_classes;
    for (std::size_t r = 0; r < shape.height; ++r)
        for (std::size_t c = 0; c < shape.width; ++c)
            land.at(r, c) = static_cast<std::uint16_t>(11 + 10 * (c / band));
    return land;
}

struct SyntheticScene {
    island::Scene scene;        // occluded copy
    island::LstGrid truth;      // pre-occlusion values
    island::LandCoverGrid land;
};

/// Class-structured field: per-class base means separated by >= 5 K,
/// a smooth 2 K gradient, and i.i.d. noise. Occlusion is a seeded
/// random pixel subset at the requested fraction.
inline SyntheticScene make_scene(std::uint64_t seed, island::GridShape shape,
                                 int n_classes, double occlusion_fraction,
                                 double noise_sigma = 0.5,
                                 island::Date date = {2021, 6, 1}) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, noise_sigma);

    SyntheticScene out;
    out.land = banded_land(shape, n_classes);
    out.truth = island::LstGrid(shape, georef());
    for (std::size_t r = 0; r < shape.height; ++r) {
        for (std::size_t c = 0; c < shape.width; ++c) {
            const int band = (out.land.at(r, c) - 11) / 10;
            const double base = 295.0 + 5.0 * band;
            const double gradient =
                2.0 * (static_cast<double>(r) + c) /
                static_cast<double>(shape.height + shape.width);
            out.truth.set(r, c, static_cast<float>(base + gradient + noise(rng)));
        }
    }

    island::OcclusionMask mask(shape, georef());
    island::LstGrid occluded = out.truth;
    for (std::size_t i = 0; i < mask.size(); ++i) {
        if (std::uniform_real_distribution<double>(0.0, 1.0)(rng) < occlusion_fraction) {
            mask.occluded[i] = 1;
            occluded.values[i] = 0.0f;
            occluded.valid[i] = 0;
        }
    }
    out.scene = island::Scene(date, std::move(occluded), std::move(mask));
    return out;
}

/// Direct per-pixel evaluation of the windowed same-class Gaussian
/// average: O(window^2) per occluded pixel, textbook form.
inline double brute_force_local(const island::Scene& scene,
                                const island::LandCoverGrid& land, std::size_t row,
                                std::size_t col, int window) {
    const double sigma = window / 2.0;
    const int radius = (window - 1) / 2;
    const auto& shape = scene.lst.shape;
    double num = 0.0, den = 0.0;
    for (int dr = -radius; dr <= radius; ++dr) {
        for (int dc = -radius; dc <= radius; ++dc) {
            const int r = static_cast<int>(row) + dr;
            const int c = static_cast<int>(col) + dc;
            if (r < 0 || c < 0 || r >= static_cast<int>(shape.height) ||
                c >= static_cast<int>(shape.width))
                continue;
            const std::size_t q = static_cast<std::size_t>(r) * shape.width + c;
            if (scene.mask.occluded[q] || !scene.lst.valid[q]) continue;
            if (land.classes[q] != land.at(row, col)) continue;
            const double dist = std::sqrt(static_cast<double>(dr) * dr +
                                          static_cast<double>(dc) * dc);
            const double w = island::gaussian_weight(dist, sigma);
            num += w * scene.lst.values[q];
            den += w;
        }
    }
    if (den == 0.0) return std::nan("");
    return num / den;
}

/// Independent per-class clear-pixel mean accumulation.
inline std::map<std::uint16_t, double> brute_force_class_means(
    const island::Scene& scene, const island::LandCoverGrid& land) {
    std::map<std::uint16_t, std::pair<double, std::uint64_t>> acc;
    for (std::size_t i = 0; i < scene.lst.size(); ++i) {
        if (scene.mask.occluded[i] || !scene.lst.valid[i]) continue;
        acc[land.classes[i]].first += scene.lst.values[i];
        acc[land.classes[i]].second += 1;
    }
    std::map<std::uint16_t, double> out;
    for (const auto& [c, p] : acc) out[c] = p.first / static_cast<double>(p.second);
    return out;
}

/// Random catalog of aligned scenes around a base date, one per cycle.
/// When `truths` is given it receives the pre-occlusion field per scene.
inline island::SceneCatalog make_catalog(std::uint64_t seed, island::GridShape shape,
                                         int n_classes, int n_scenes,
                                         double occlusion_fraction,
                                         std::vector<island::LstGrid>* truths = nullptr) {
    island::SceneCatalog cat;
    cat.cycle_days = 16;
    cat.land = banded_land(shape, n_classes);
    island::Date base{2021, 5, 1};
    for (int i = 0; i < n_scenes; ++i) {
        long long day = base.days_since_epoch() + 16LL * i;
        // back to civil date
        island::Date d = base;
        {
            long long z = day + 719468;
            const long long era = (z >= 0 ? z : z - 146096) / 146097;
            const unsigned doe = static_cast<unsigned>(z - era * 146097);
            const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
            const long long y = static_cast<long long>(yoe) + era * 400;
            const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
            const unsigned mp = (5 * doy + 2) / 153;
            d.day = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
            d.month = static_cast<int>(mp < 10 ? mp + 3 : mp - 9);
            d.year = static_cast<int>(y + (d.month <= 2));
        }
        auto syn = make_scene(seed + static_cast<std::uint64_t>(i) * 7919, shape,
                              n_classes, occlusion_fraction, 0.5, d);
        if (truths != nullptr) truths->push_back(syn.truth);
        cat.scenes.push_back(std::move(syn.scene));
    }
    cat.validate();
    return cat;
}

}  // namespace testutil

#endif  // ISLAND_TESTS_HELPERS_HPP
