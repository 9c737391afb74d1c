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
#ifndef ISLAND_MANIFEST_HPP
#define ISLAND_MANIFEST_HPP

#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "island/geotiff.hpp"
#include "island/insitu.hpp"

namespace island {

struct SceneEntry {
    Date date;
    std::string lst_path;
    std::string qa_path;
};

/// Dataset manifest: JSON file with the land-cover raster, scene list,
/// revisit cycle, and DN scaling. Paths are relative to the manifest.
struct DatasetManifest {
    std::string region;
    std::string land_cover_path;
    std::vector<SceneEntry> scenes;
    int cycle_days = 16;
    DnScaling dn;

    static DatasetManifest load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw GridError("cannot open manifest: " + path);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw GridError("malformed manifest " + path + ": " + e.what());
        }
        const auto base = std::filesystem::path(path).parent_path();
        auto resolve = [&](const std::string& p) {
            std::filesystem::path fp(p);
            return fp.is_absolute() ? fp.string() : (base / fp).string();
        };

        DatasetManifest m;
        try {
            m.region = j.at("region").get<std::string>();
            m.land_cover_path = resolve(j.at("land_cover").get<std::string>());
            m.cycle_days = j.value("cycle_days", 16);
            m.dn.scale = j.value("dn_scale", DnScaling{}.scale);
            m.dn.offset = j.value("dn_offset", DnScaling{}.offset);
            std::set<std::string> seen;
            for (const auto& s : j.at("scenes")) {
                SceneEntry e;
                e.date = Date::parse(s.at("date").get<std::string>());
                if (!seen.insert(e.date.to_string()).second)
                    throw GridError("manifest: duplicate scene date " +
                                    e.date.to_string());
                e.lst_path = resolve(s.at("lst").get<std::string>());
                e.qa_path = resolve(s.at("qa").get<std::string>());
                m.scenes.push_back(e);
            }
        } catch (const nlohmann::json::exception& e) {
            throw GridError("manifest " + path + " missing field: " + e.what());
        }
        if (m.scenes.empty()) throw GridError("manifest has no scenes: " + path);
        if (m.cycle_days < 1) throw GridError("manifest: cycle_days must be >= 1");
        for (const auto& s : m.scenes) {
            if (!std::filesystem::exists(s.lst_path))
                throw GridError("manifest references missing file: " + s.lst_path);
            if (!std::filesystem::exists(s.qa_path))
                throw GridError("manifest references missing file: " + s.qa_path);
        }
        if (!std::filesystem::exists(m.land_cover_path))
            throw GridError("manifest references missing file: " + m.land_cover_path);
        return m;
    }
};

/// Loads every scene, decodes masks, and checks mutual alignment.
inline SceneCatalog load_catalog(const DatasetManifest& manifest, const QaPolicy& policy) {
    SceneCatalog cat;
    cat.cycle_days = manifest.cycle_days;
    cat.land = read_land_cover(manifest.land_cover_path);
    std::vector<SceneEntry> entries = manifest.scenes;
    std::sort(entries.begin(), entries.end(),
              [](const SceneEntry& a, const SceneEntry& b) { return a.date < b.date; });
    for (const auto& e : entries) {
        LstGrid lst = read_lst(e.lst_path, 0, manifest.dn);
        OcclusionMask mask = decode_qa(read_bitfield(e.qa_path), policy);
        cat.scenes.emplace_back(e.date, std::move(lst), std::move(mask));
    }
    cat.validate();
    return cat;
}

/// Runtime configuration; every field is validated before any work.
struct RunConfig {
    SpatialParams spatial;
    TemporalParams temporal;
    QaPolicy qa;
    ReconstructionMode mode = ReconstructionMode::M1;
    std::string output_dir = ".";
    unsigned threads = 0;  // 0 = hardware concurrency
    bool crop_to_valid = false;

    void validate() const {
        spatial.validate();
        temporal.validate();
        qa.validate();
    }

    /// Merges a JSON config file; CLI flags override these afterwards.
    void merge_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw GridError("cannot open config: " + path);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw GridError("malformed config " + path + ": " + e.what());
        }
        spatial.window = j.value("window", spatial.window);
        spatial.theta_star = j.value("theta_star", spatial.theta_star);
        temporal.reference_count = j.value("refs", temporal.reference_count);
        temporal.bracket_cycles = j.value("bracket", temporal.bracket_cycles);
        temporal.theta_max = j.value("theta_max", temporal.theta_max);
        if (j.contains("mode")) mode = parse_mode(j["mode"].get<std::string>());
        threads = j.value("threads", threads);
        crop_to_valid = j.value("crop_to_valid", crop_to_valid);
        if (j.contains("qa")) {
            const auto& q = j["qa"];
            qa.fill_bit = q.value("fill", qa.fill_bit);
            qa.dilated_cloud_bit = q.value("dilated_cloud", qa.dilated_cloud_bit);
            qa.cirrus_bit = q.value("cirrus", qa.cirrus_bit);
            qa.cloud_bit = q.value("cloud", qa.cloud_bit);
            qa.cloud_shadow_bit = q.value("cloud_shadow", qa.cloud_shadow_bit);
            qa.include_dilated = q.value("include_dilated", qa.include_dilated);
        }
        validate();
    }
};

}  // namespace island

#endif  // ISLAND_MANIFEST_HPP
