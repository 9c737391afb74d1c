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
#ifndef ISLAND_SCENE_HPP
#define ISLAND_SCENE_HPP

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "island/grid.hpp"
#include "island/qa.hpp"

namespace island {

/// UTC calendar date with an optional acquisition time of day.
struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;
    int seconds_of_day = 0;  // 0 when only the date is known

    bool operator==(const Date& o) const {
        return year == o.year && month == o.month && day == o.day;
    }
    bool operator<(const Date& o) const {
        if (year != o.year) return year < o.year;
        if (month != o.month) return month < o.month;
        return day < o.day;
    }

    static bool is_leap(int y) {
        return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    }

    // Howard Hinnant's days-from-civil algorithm.
    long long days_since_epoch() const {
        int y = year;
        const int m = month, d = day;
        y -= m <= 2;
        const long long era = (y >= 0 ? y : y - 399) / 400;
        const unsigned yoe = static_cast<unsigned>(y - era * 400);
        const unsigned doy_ = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
        const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy_;
        return era * 146097 + static_cast<long long>(doe) - 719468;
    }

    long long epoch_seconds() const {
        return days_since_epoch() * 86400LL + seconds_of_day;
    }

    /// Day-of-year on a 365-day calendar: in leap years, dates after
    /// Feb 28 shift back one so seasons line up across years, and
    /// Feb 29 itself folds to day 365.
    int day_of_year_folded() const {
        static const int cum[] = {0, 31, 59, 90, 120, 151, 181, 212, 243, 273, 304, 334};
        if (month == 2 && day == 29) return 365;
        int doy = cum[month - 1] + day;
        return doy;
    }

    std::string to_string() const {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
        return buf;
    }

    /// Parses "YYYY-MM-DD" or "YYYY-MM-DDTHH:MM:SS".
    static Date parse(const std::string& s) {
        Date d;
        int h = 0, mi = 0, se = 0;
        const int n = std::sscanf(s.c_str(), "%d-%d-%dT%d:%d:%d", &d.year, &d.month,
                                  &d.day, &h, &mi, &se);
        if (n < 3 || d.month < 1 || d.month > 12 || d.day < 1 || d.day > 31)
            throw GridError("unparsable date: " + s);
        d.seconds_of_day = h * 3600 + mi * 60 + se;
        return d;
    }
};

/// Circular distance between two folded days-of-year.
inline int doy_distance(int a, int b) {
    int d = a - b;
    if (d < 0) d = -d;
    return std::min(d, 365 - d);
}

/// One Landsat acquisition: LST + occlusion mask + cached theta.
struct Scene {
    Date date;
    LstGrid lst;
    OcclusionMask mask;
    double theta = 0.0;

    Scene() = default;
    Scene(Date d, LstGrid l, OcclusionMask m)
        : date(d), lst(std::move(l)), mask(std::move(m)) {
        check_aligned_named({"lst", "mask"}, lst, mask);
        theta = occlusion_factor(mask);
    }

    /// True where the pixel must be reconstructed: flagged contaminated
    /// or missing from the LST grid (fill).
    bool needs_fill(std::size_t row, std::size_t col) const {
        return mask.at(row, col) || !lst.is_valid(row, col);
    }
};

/// Time-ordered scenes over one region sharing one land-cover grid.
struct SceneCatalog {
    std::vector<Scene> scenes;
    LandCoverGrid land;
    int cycle_days = 16;

    void validate() const {
        for (std::size_t i = 0; i < scenes.size(); ++i) {
            check_aligned_named({"land", "scene " + scenes[i].date.to_string()}, land,
                                scenes[i].lst);
            if (i > 0 && !(scenes[i - 1].date < scenes[i].date))
                throw GridError("catalog dates not strictly increasing at " +
                                scenes[i].date.to_string());
        }
    }

    const Scene* find(const Date& d) const {
        for (const auto& s : scenes)
            if (s.date == d) return &s;
        return nullptr;
    }

    std::vector<std::string> dates() const {
        std::vector<std::string> out;
        out.reserve(scenes.size());
        for (const auto& s : scenes) out.push_back(s.date.to_string());
        return out;
    }
};

}  // namespace island

#endif  // ISLAND_SCENE_HPP
