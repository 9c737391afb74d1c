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
#ifndef ISLAND_FUSION_HPP
#define ISLAND_FUSION_HPP

#include <string>
#include <vector>

#include "island/temporal.hpp"

namespace island {

/// Ablation modes: M1 full model, M2 spatial only, M3 temporal only,
/// M4 full model without land cover, M5 naive clear-pixel mean.
enum class ReconstructionMode { M1, M2, M3, M4, M5 };

inline std::string mode_name(ReconstructionMode m) {
    switch (m) {
        case ReconstructionMode::M1: return "m1";
        case ReconstructionMode::M2: return "m2";
        case ReconstructionMode::M3: return "m3";
        case ReconstructionMode::M4: return "m4";
        case ReconstructionMode::M5: return "m5";
    }
    return "?";
}

inline ReconstructionMode parse_mode(const std::string& s) {
    if (s == "m1" || s == "M1") return ReconstructionMode::M1;
    if (s == "m2" || s == "M2") return ReconstructionMode::M2;
    if (s == "m3" || s == "M3") return ReconstructionMode::M3;
    if (s == "m4" || s == "M4") return ReconstructionMode::M4;
    if (s == "m5" || s == "M5") return ReconstructionMode::M5;
    throw GridError("unknown mode: " + s + " (expected m1..m5)");
}

enum class Provenance : std::uint8_t {
    Observed = 0,
    Spatial = 1,
    Temporal = 2,
    Fused = 3,
    Fallback = 4,
};

struct ReconstructionResult {
    LstGrid output;
    double theta = 0.0;
    ReconstructionMode mode = ReconstructionMode::M1;
    std::vector<Date> references_used;
    Grid<std::uint8_t> provenance;
    bool degraded_to_spatial = false;  // M1 without admissible references
};

inline constexpr double kServiceabilityBound = 0.99;

/// Per-pixel weighted average of the channel predictions, w = 1 - theta.
inline LstGrid fuse(const LstGrid& spatial, const LstGrid& temporal, double theta) {
    if (!(theta >= 0.0 && theta <= 1.0))
        throw GridError("fuse: theta must be in [0, 1]");
    check_aligned_named({"spatial", "temporal"}, spatial, temporal);
    const double w = 1.0 - theta;
    LstGrid out(spatial.shape, spatial.georef);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out.values[i] = static_cast<float>(w * spatial.values[i] +
                                           theta * static_cast<double>(temporal.values[i]));
        out.valid[i] = spatial.valid[i] && temporal.valid[i];
    }
    return out;
}

namespace detail {

inline LstGrid naive_mean_fill(const Scene& scene) {
    const double mean = global_clear_mean(scene);
    LstGrid out = scene.lst;
    for (std::size_t r = 0; r < out.shape.height; ++r)
        for (std::size_t c = 0; c < out.shape.width; ++c)
            if (scene.needs_fill(r, c)) out.set(r, c, static_cast<float>(mean));
    return out;
}

inline SceneCatalog degenerate_land(const SceneCatalog& catalog) {
    SceneCatalog flat = catalog;
    std::fill(flat.land.classes.begin(), flat.land.classes.end(), std::uint16_t{0});
    flat.land.legend.clear();
    return flat;
}

}  // namespace detail

/// Reconstructs the target scene. Refuses theta >= 0.99; M1 degrades to
/// spatial-only (with a flag) when no temporal reference is admissible.
inline ReconstructionResult reconstruct(const SceneCatalog& catalog, const Scene& target,
                                        ReconstructionMode mode,
                                        const SpatialParams& s_params,
                                        const TemporalParams& t_params) {
    if (target.theta >= kServiceabilityBound)
        throw GridError("occlusion factor " + std::to_string(target.theta) +
                        " exceeds serviceability bound (theta < 0.99) for " +
                        target.date.to_string());

    if (mode == ReconstructionMode::M4) {
        const SceneCatalog flat = detail::degenerate_land(catalog);
        ReconstructionResult res =
            reconstruct(flat, target, ReconstructionMode::M1, s_params, t_params);
        res.mode = ReconstructionMode::M4;
        return res;
    }

    ReconstructionResult res;
    res.theta = target.theta;
    res.mode = mode;
    res.provenance = Grid<std::uint8_t>(target.lst.shape, target.lst.georef,
                                        std::uint8_t(Provenance::Observed));

    auto stamp = [&](Provenance p) {
        for (std::size_t r = 0; r < target.lst.shape.height; ++r)
            for (std::size_t c = 0; c < target.lst.shape.width; ++c)
                if (target.needs_fill(r, c))
                    res.provenance.at(r, c) = static_cast<std::uint8_t>(p);
    };

    switch (mode) {
        case ReconstructionMode::M2: {
            res.output = spatial_channel(target, catalog.land, s_params).output;
            stamp(Provenance::Spatial);
            break;
        }
        case ReconstructionMode::M3: {
            TemporalResult t = temporal_channel(catalog, target, t_params, s_params);
            res.output = std::move(t.output);
            res.references_used = std::move(t.references_used);
            stamp(Provenance::Temporal);
            break;
        }
        case ReconstructionMode::M5: {
            res.output = detail::naive_mean_fill(target);
            stamp(Provenance::Fallback);
            break;
        }
        case ReconstructionMode::M1: {
            LstGrid spatial = spatial_channel(target, catalog.land, s_params).output;
            bool have_refs = true;
            try {
                select_references(catalog, target, t_params);
            } catch (const GridError&) {
                have_refs = false;
            }
            if (have_refs) {
                TemporalResult t = temporal_channel(catalog, target, t_params, s_params);
                res.output = fuse(spatial, t.output, target.theta);
                res.references_used = std::move(t.references_used);
                stamp(Provenance::Fused);
            } else {
                res.output = std::move(spatial);
                res.degraded_to_spatial = true;
                stamp(Provenance::Spatial);
            }
            break;
        }
        case ReconstructionMode::M4:
            break;  // handled above
    }
    return res;
}

inline ReconstructionResult reconstruct(const SceneCatalog& catalog, const Date& date,
                                        ReconstructionMode mode,
                                        const SpatialParams& s_params,
                                        const TemporalParams& t_params) {
    const Scene* target = catalog.find(date);
    if (!target) {
        std::string avail;
        for (const auto& d : catalog.dates()) avail += (avail.empty() ? "" : ", ") + d;
        throw GridError("date " + date.to_string() +
                        " not in catalog; available: " + avail);
    }
    return reconstruct(catalog, *target, mode, s_params, t_params);
}

}  // namespace island

#endif  // ISLAND_FUSION_HPP
