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
#ifndef ISLAND_EVAL_HPP
#define ISLAND_EVAL_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "island/fusion.hpp"

namespace island {

/// Artificial occlusion: up to n axis-aligned s x s squares, seeded.
struct OcclusionSpec {
    int size = 16;         // s: square side length in pixels
    int max_count = 4;     // n: maximum number of squares
    std::uint64_t seed = 0;

    void validate() const {
        if (size < 1) throw GridError("OcclusionSpec: size must be >= 1");
        if (max_count < 1) throw GridError("OcclusionSpec: max_count must be >= 1");
    }
};

struct SimulatedScene {
    Scene scene;                          // augmented copy
    Grid<std::uint8_t> artificial_mask;   // 1 inside placed squares
    int squares_placed = 0;
    int squares_requested = 0;
};

namespace detail {

// mt19937_64 with modulo reduction: deterministic across platforms,
// unlike std::uniform_int_distribution.
inline std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
    return rng() % n;
}

}  // namespace detail

/// Places the squares by rejection sampling (1000 tries per square)
/// against real occlusion and earlier squares. LST is zeroed and the
/// mask set inside each square; theta is recomputed.
inline SimulatedScene simulate_occlusion(const Scene& scene, const OcclusionSpec& spec) {
    spec.validate();
    const GridShape shape = scene.lst.shape;
    if (static_cast<std::size_t>(spec.size) > shape.height ||
        static_cast<std::size_t>(spec.size) > shape.width)
        throw GridError("occlusion square larger than image");

    std::mt19937_64 rng(spec.seed);
    SimulatedScene out;
    out.artificial_mask = Grid<std::uint8_t>(shape, scene.lst.georef, 0);
    out.squares_requested =
        1 + static_cast<int>(detail::bounded(rng, static_cast<std::uint64_t>(spec.max_count)));

    Scene aug = scene;
    const std::size_t s = static_cast<std::size_t>(spec.size);
    const std::size_t rows = shape.height - s + 1;
    const std::size_t cols = shape.width - s + 1;

    for (int q = 0; q < out.squares_requested; ++q) {
        bool placed = false;
        for (int attempt = 0; attempt < 1000 && !placed; ++attempt) {
            const std::size_t r0 = detail::bounded(rng, rows);
            const std::size_t c0 = detail::bounded(rng, cols);
            bool free = true;
            for (std::size_t r = r0; r < r0 + s && free; ++r)
                for (std::size_t c = c0; c < c0 + s && free; ++c)
                    if (scene.mask.at(r, c) || out.artificial_mask.at(r, c))
                        free = false;
            if (!free) continue;
            for (std::size_t r = r0; r < r0 + s; ++r) {
                for (std::size_t c = c0; c < c0 + s; ++c) {
                    out.artificial_mask.at(r, c) = 1;
                    aug.lst.values[r * shape.width + c] = 0.0f;
                    aug.lst.valid[r * shape.width + c] = 0;
                    aug.mask.set(r, c, true);
                }
            }
            placed = true;
        }
        if (placed) ++out.squares_placed;
    }
    if (out.squares_placed == 0)
        throw GridError("simulate_occlusion: no square placeable");
    aug.theta = occlusion_factor(aug.mask);
    out.scene = std::move(aug);
    return out;
}

struct EvalReport {
    std::string scene_date;
    std::string mode;
    double mae = 0.0;
    double rmse = 0.0;
    double bias = 0.0;
    std::uint64_t pixels = 0;
    int occlusion_size = 0;
    int occlusion_count = 0;
    std::uint64_t seed = 0;
    std::string error;  // nonempty when this run failed
};

/// MAE / RMSE / bias over artificially occluded pixels only.
inline EvalReport score(const LstGrid& reconstructed, const LstGrid& truth,
                        const Grid<std::uint8_t>& artificial_mask) {
    check_aligned_named({"reconstructed", "truth", "mask"}, reconstructed, truth,
                        artificial_mask);
    double abs_sum = 0.0, sq_sum = 0.0, sum = 0.0;
    std::uint64_t n = 0;
    for (std::size_t i = 0; i < artificial_mask.data.size(); ++i) {
        if (!artificial_mask.data[i]) continue;
        if (!reconstructed.valid[i] || !truth.valid[i])
            throw GridError("score: invalid pixel inside artificial mask");
        const double d = static_cast<double>(reconstructed.values[i]) - truth.values[i];
        abs_sum += std::abs(d);
        sq_sum += d * d;
        sum += d;
        ++n;
    }
    if (n == 0) throw GridError("score: empty artificial mask");
    EvalReport r;
    r.pixels = n;
    r.mae = abs_sum / static_cast<double>(n);
    r.rmse = std::sqrt(sq_sum / static_cast<double>(n));
    r.bias = sum / static_cast<double>(n);
    return r;
}

/// Per scene and mode: simulate, reconstruct, score. One artificial
/// mask per scene so modes are comparable; per-scene failures are
/// recorded and the suite continues.
inline std::vector<EvalReport> ablation_suite(const SceneCatalog& catalog,
                                              const OcclusionSpec& spec,
                                              const std::vector<ReconstructionMode>& modes,
                                              const SpatialParams& s_params,
                                              const TemporalParams& t_params) {
    if (catalog.scenes.empty()) throw GridError("ablation_suite: empty catalog");
    std::vector<EvalReport> reports;
    for (std::size_t si = 0; si < catalog.scenes.size(); ++si) {
        const Scene& scene = catalog.scenes[si];
        OcclusionSpec per = spec;
        per.seed = spec.seed + si;  // distinct placement per scene, reproducible
        SimulatedScene sim;
        try {
            sim = simulate_occlusion(scene, per);
        } catch (const GridError& e) {
            EvalReport r;
            r.scene_date = scene.date.to_string();
            r.error = e.what();
            reports.push_back(r);
            continue;
        }
        for (ReconstructionMode mode : modes) {
            EvalReport r;
            r.scene_date = scene.date.to_string();
            r.mode = mode_name(mode);
            r.occlusion_size = per.size;
            r.occlusion_count = sim.squares_placed;
            r.seed = per.seed;
            try {
                const auto rec =
                    reconstruct(catalog, sim.scene, mode, s_params, t_params);
                EvalReport s = score(rec.output, scene.lst, sim.artificial_mask);
                r.mae = s.mae;
                r.rmse = s.rmse;
                r.bias = s.bias;
                r.pixels = s.pixels;
            } catch (const GridError& e) {
                r.error = e.what();
            }
            reports.push_back(r);
        }
    }
    return reports;
}

}  // namespace island

#endif  // ISLAND_EVAL_HPP
