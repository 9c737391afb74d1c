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
#ifndef ISLAND_ANALYTICS_HPP
#define ISLAND_ANALYTICS_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "island/fusion.hpp"

namespace island {

struct ClassSeriesRow {
    std::string date;
    std::uint16_t class_code = 0;
    std::string class_name;
    double mean_kelvin = 0.0;
    std::uint64_t pixels = 0;
};

/// Per-class mean of a reconstructed (fully valid) grid.
inline std::vector<ClassSeriesRow> class_series_rows(const std::string& date,
                                                     const LstGrid& reconstructed,
                                                     const LandCoverGrid& land) {
    check_aligned_named({"reconstructed", "land"}, reconstructed, land);
    std::map<std::uint16_t, double> sum;
    std::map<std::uint16_t, std::uint64_t> cnt;
    for (std::size_t i = 0; i < reconstructed.size(); ++i) {
        if (!reconstructed.valid[i]) continue;
        sum[land.classes[i]] += reconstructed.values[i];
        ++cnt[land.classes[i]];
    }
    std::vector<ClassSeriesRow> rows;
    for (const auto& [c, s] : sum) {
        ClassSeriesRow r;
        r.date = date;
        r.class_code = c;
        if (auto it = land.legend.find(c); it != land.legend.end())
            r.class_name = it->second;
        r.mean_kelvin = s / static_cast<double>(cnt[c]);
        r.pixels = cnt[c];
        rows.push_back(r);
    }
    return rows;
}

/// Per-pixel count of reconstructed scenes exceeding the threshold.
inline Grid<std::uint16_t> heatday_counts(const std::vector<LstGrid>& reconstructed,
                                          double threshold_kelvin) {
    if (reconstructed.empty()) throw GridError("heatday_counts: no scenes");
    Grid<std::uint16_t> counts(reconstructed.front().shape,
                               reconstructed.front().georef, 0);
    for (const auto& g : reconstructed) {
        check_aligned_named({"first", "grid"}, reconstructed.front(), g);
        for (std::size_t i = 0; i < g.size(); ++i)
            if (g.valid[i] && g.values[i] > threshold_kelvin) ++counts.data[i];
    }
    return counts;
}

}  // namespace island

#endif  // ISLAND_ANALYTICS_HPP
