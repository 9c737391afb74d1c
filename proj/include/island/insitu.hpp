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
#ifndef ISLAND_INSITU_HPP
#define ISLAND_INSITU_HPP

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "island/eval.hpp"

namespace island {

// CODATA value.
inline constexpr double kStefanBoltzmann = 5.670374419e-8;  // W m^-2 K^-4

/// One ground-station longwave flux measurement.
struct StationRecord {
    Date timestamp;
    double flux_up = 0.0;    // W m^-2
    double flux_down = 0.0;  // W m^-2
    double emissivity = 1.0; // broadband

    void validate() const {
        if (flux_up <= 0.0 || flux_down <= 0.0)
            throw GridError("StationRecord: fluxes must be positive");
        if (!(emissivity > 0.0 && emissivity <= 1.0))
            throw GridError("StationRecord: emissivity must be in (0, 1]");
    }
};

/// Spectral-to-broadband regression over the five ASTER thermal bands.
inline double broadband_emissivity(double e10, double e11, double e12, double e13,
                                   double e14) {
    for (double e : {e10, e11, e12, e13, e14})
        if (!(e > 0.0 && e <= 1.0))
            throw GridError("broadband_emissivity: narrowband values must be in (0, 1]");
    return 0.128 + 0.014 * e10 + 0.145 * e11 + 0.241 * e12 + 0.467 * e13 + 0.004 * e14;
}

/// Surface skin temperature from measured fluxes, inverting the
/// upwelling component of the Stefan-Boltzmann balance.
inline double insitu_lst(const StationRecord& rec) {
    rec.validate();
    const double radicand =
        (rec.flux_up - (1.0 - rec.emissivity) * rec.flux_down) /
        (rec.emissivity * kStefanBoltzmann);
    if (radicand <= 0.0)
        throw GridError("insitu_lst: non-positive radicand (F_up too small)");
    return std::pow(radicand, 0.25);
}

/// Forward synthesis: upwelling flux from a known skin temperature.
inline double upwelling_flux(double t_s, double emissivity, double flux_down) {
    return (1.0 - emissivity) * flux_down +
           emissivity * kStefanBoltzmann * t_s * t_s * t_s * t_s;
}

/// CSV schema: timestamp,flux_up,flux_down,emissivity with an optional
/// header line. Unparsable data rows are skipped and counted.
struct StationFile {
    std::vector<StationRecord> records;
    std::size_t skipped = 0;
};

inline StationFile read_station_records(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw GridError("cannot open station records: " + path);
    StationFile out;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.find("timestamp") != std::string::npos) continue;
        }
        std::istringstream ss(line);
        std::string ts, up, down, eps;
        if (!std::getline(ss, ts, ',') || !std::getline(ss, up, ',') ||
            !std::getline(ss, down, ',')) {
            ++out.skipped;
            continue;
        }
        std::getline(ss, eps, ',');
        try {
            StationRecord r;
            r.timestamp = Date::parse(ts);
            r.flux_up = std::stod(up);
            r.flux_down = std::stod(down);
            r.emissivity = eps.empty() ? 1.0 : std::stod(eps);
            r.validate();
            out.records.push_back(r);
        } catch (const std::exception&) {
            ++out.skipped;
        }
    }
    return out;
}

struct InsituPair {
    std::string scene_date;
    double satellite = 0.0;  // observed or reconstructed pixel, K
    double station = 0.0;    // in-situ T_s, K
    bool cloudy = false;
};

struct InsituStats {
    std::uint64_t pairs = 0;
    double rmse = 0.0;
    double bias = 0.0;
};

struct InsituReport {
    std::vector<InsituPair> pairs;
    InsituStats clear_sky;
    InsituStats cloudy_sky;
    std::size_t skipped_scenes = 0;  // over bound, no match, or failed math
};

struct InsituParams {
    std::size_t pixel_row = 0;
    std::size_t pixel_col = 0;
    long long match_window_seconds = 600;  // +/- around the overpass
    int footprint = 1;                     // k: k x k mean window, odd
};

namespace detail {

inline InsituStats stats_of(const std::vector<InsituPair>& pairs, bool cloudy) {
    InsituStats s;
    double sq = 0.0, sum = 0.0;
    for (const auto& p : pairs) {
        if (p.cloudy != cloudy) continue;
        const double d = p.satellite - p.station;
        sq += d * d;
        sum += d;
        ++s.pairs;
    }
    if (s.pairs > 0) {
        s.rmse = std::sqrt(sq / static_cast<double>(s.pairs));
        s.bias = sum / static_cast<double>(s.pairs);
    }
    return s;
}

inline double footprint_mean(const LstGrid& g, std::size_t row, std::size_t col, int k) {
    const int r0 = static_cast<int>(row) - k / 2;
    const int c0 = static_cast<int>(col) - k / 2;
    double sum = 0.0;
    int n = 0;
    for (int r = r0; r < r0 + k; ++r) {
        for (int c = c0; c < c0 + k; ++c) {
            if (r < 0 || c < 0 || r >= static_cast<int>(g.shape.height) ||
                c >= static_cast<int>(g.shape.width))
                continue;
            if (!g.valid[static_cast<std::size_t>(r) * g.shape.width + c]) continue;
            sum += g.values[static_cast<std::size_t>(r) * g.shape.width + c];
            ++n;
        }
    }
    if (n == 0) throw GridError("insitu: no valid pixel in footprint");
    return sum / n;
}

}  // namespace detail

/// Pairs each serviceable scene with the time-nearest station record.
/// Clear-sky pairs compare the raw observation, cloudy-sky pairs the
/// reconstruction, to the inverted station temperature.
inline InsituReport insitu_validate(const SceneCatalog& catalog,
                                    const std::vector<StationRecord>& records,
                                    const InsituParams& params,
                                    const SpatialParams& s_params,
                                    const TemporalParams& t_params) {
    if (params.footprint < 1 || params.footprint % 2 == 0)
        throw GridError("insitu: footprint must be odd and >= 1");
    InsituReport report;
    for (const auto& scene : catalog.scenes) {
        if (params.pixel_row >= scene.lst.shape.height ||
            params.pixel_col >= scene.lst.shape.width)
            throw GridError("insitu: station pixel outside grid");
        if (scene.theta > kServiceabilityBound) {
            ++report.skipped_scenes;
            continue;
        }
        const long long overpass = scene.date.epoch_seconds();
        const StationRecord* best = nullptr;
        long long best_dt = 0;
        for (const auto& r : records) {
            const long long dt = std::llabs(r.timestamp.epoch_seconds() - overpass);
            if (dt > params.match_window_seconds) continue;
            if (!best || dt < best_dt) {
                best = &r;
                best_dt = dt;
            }
        }
        if (!best) {
            ++report.skipped_scenes;
            continue;
        }
        InsituPair pair;
        pair.scene_date = scene.date.to_string();
        pair.cloudy = scene.mask.at(params.pixel_row, params.pixel_col);
        try {
            pair.station = insitu_lst(*best);
            if (pair.cloudy) {
                const auto rec = reconstruct(catalog, scene, ReconstructionMode::M1,
                                             s_params, t_params);
                pair.satellite = detail::footprint_mean(rec.output, params.pixel_row,
                                                        params.pixel_col,
                                                        params.footprint);
            } else {
                pair.satellite = detail::footprint_mean(scene.lst, params.pixel_row,
                                                        params.pixel_col,
                                                        params.footprint);
            }
        } catch (const GridError&) {
            ++report.skipped_scenes;
            continue;
        }
        report.pairs.push_back(pair);
    }
    report.clear_sky = detail::stats_of(report.pairs, false);
    report.cloudy_sky = detail::stats_of(report.pairs, true);
    return report;
}

}  // namespace island

#endif  // ISLAND_INSITU_HPP
