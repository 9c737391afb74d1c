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
#ifndef ISLAND_TEMPORAL_HPP
#define ISLAND_TEMPORAL_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "island/spatial.hpp"

namespace island {

struct TemporalParams {
    int reference_count = 3;   // n: references averaged
    int bracket_cycles = 2;    // delta: seasonal bracket, in revisit cycles
    double theta_max = 0.1;    // maximum tolerable reference occlusion
    bool absolute_shift = false;  // debug mode: unsigned class shifts

    void validate() const {
        if (reference_count < 1)
            throw GridError("TemporalParams: reference_count must be >= 1");
        if (bracket_cycles < 0)
            throw GridError("TemporalParams: bracket_cycles must be >= 0");
        if (!(theta_max >= 0.0 && theta_max < 1.0))
            throw GridError("TemporalParams: theta_max must be in [0, 1)");
    }
};

/// Per-class additive adjustment aligning a reference to the target.
struct ClassShift {
    std::map<std::uint16_t, double> shift;
    std::map<std::uint16_t, std::uint64_t> count;
    std::vector<std::uint16_t> missing;  // classes with no usable pixels
};

/// Candidates sit inside the day-of-year bracket (any year, wrapping at
/// year boundaries) with theta below theta_max; the n closest in
/// calendar time win, ties broken by earlier date.
inline std::vector<const Scene*> select_references(const SceneCatalog& catalog,
                                                   const Scene& target,
                                                   const TemporalParams& params) {
    params.validate();
    const int bracket_days = params.bracket_cycles * catalog.cycle_days;
    const int target_doy = target.date.day_of_year_folded();
    const long long target_day = target.date.days_since_epoch();

    struct Candidate {
        const Scene* scene;
        long long abs_dt;
    };
    std::vector<Candidate> cands;
    for (const auto& s : catalog.scenes) {
        if (s.date == target.date) continue;
        if (s.theta >= params.theta_max) continue;
        if (doy_distance(s.date.day_of_year_folded(), target_doy) > bracket_days)
            continue;
        long long dt = s.date.days_since_epoch() - target_day;
        cands.push_back({&s, dt < 0 ? -dt : dt});
    }
    if (cands.empty())
        throw GridError("no admissible reference frames for " + target.date.to_string());

    std::stable_sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
        if (a.abs_dt != b.abs_dt) return a.abs_dt < b.abs_dt;
        return a.scene->date < b.scene->date;
    });
    std::vector<const Scene*> out;
    for (std::size_t i = 0; i < cands.size() && i < static_cast<std::size_t>(params.reference_count); ++i)
        out.push_back(cands[i].scene);
    return out;
}

/// Signed mean difference target-minus-reference per class, over pixels
/// clear in the target. The reference grid must already be complete.
inline ClassShift class_shift(const Scene& target, const LstGrid& reference,
                              const LandCoverGrid& land, bool absolute = false) {
    check_aligned_named({"target", "reference", "land"}, target.lst, reference, land);
    std::map<std::uint16_t, double> sum;
    std::map<std::uint16_t, std::uint64_t> cnt;
    for (std::size_t i = 0; i < target.lst.size(); ++i) {
        if (target.mask.occluded[i] || !target.lst.valid[i]) continue;
        if (!reference.valid[i]) continue;
        double d = static_cast<double>(target.lst.values[i]) - reference.values[i];
        if (absolute && d < 0) d = -d;
        sum[land.classes[i]] += d;
        ++cnt[land.classes[i]];
    }
    ClassShift out;
    for (const auto& [c, s] : sum) {
        out.shift[c] = s / static_cast<double>(cnt[c]);
        out.count[c] = cnt[c];
    }
    // every class present in the land grid gets an entry; zero when unusable
    std::vector<std::uint16_t> classes(land.classes.begin(), land.classes.end());
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
    for (std::uint16_t c : classes) {
        if (!out.shift.count(c)) {
            out.shift[c] = 0.0;
            out.count[c] = 0;
            out.missing.push_back(c);
        }
    }
    return out;
}

struct TemporalResult {
    LstGrid output;
    std::vector<Date> references_used;
};

/// Algorithm: select references, complete each via the spatial channel,
/// apply per-class shifts, average, then restore observed target pixels.
inline TemporalResult temporal_channel(const SceneCatalog& catalog, const Scene& target,
                                       const TemporalParams& t_params,
                                       const SpatialParams& s_params) {
    t_params.validate();
    s_params.validate();
    const LandCoverGrid& land = catalog.land;
    check_aligned_named({"target", "land"}, target.lst, land);

    const auto refs = select_references(catalog, target, t_params);

    const GridShape shape = target.lst.shape;
    std::vector<double> acc(shape.pixels(), 0.0);

    std::vector<LstGrid> completed(refs.size());
    const unsigned threads = s_params.threads == 0 ? default_threads() : s_params.threads;
    parallel_for(refs.size(), std::min<unsigned>(threads, static_cast<unsigned>(refs.size())),
                 [&](std::size_t b, std::size_t e) {
                     for (std::size_t i = b; i < e; ++i) {
                         SpatialParams sp = s_params;
                         sp.threads = 1;
                         completed[i] = spatial_channel(*refs[i], land, sp).output;
                     }
                 });

    TemporalResult res;
    for (std::size_t i = 0; i < refs.size(); ++i) {
        const ClassShift shift = class_shift(target, completed[i], land,
                                             t_params.absolute_shift);
        for (std::size_t p = 0; p < acc.size(); ++p)
            acc[p] += completed[i].values[p] + shift.shift.at(land.classes[p]);
        res.references_used.push_back(refs[i]->date);
    }

    res.output = LstGrid(shape, target.lst.georef);
    const double inv_n = 1.0 / static_cast<double>(refs.size());
    for (std::size_t p = 0; p < acc.size(); ++p) {
        res.output.values[p] = static_cast<float>(acc[p] * inv_n);
        res.output.valid[p] = 1;
    }
    // observed target pixels pass through unchanged
    for (std::size_t p = 0; p < acc.size(); ++p) {
        if (!target.mask.occluded[p] && target.lst.valid[p])
            res.output.values[p] = target.lst.values[p];
    }
    return res;
}

}  // namespace island

#endif  // ISLAND_TEMPORAL_HPP
