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

// island: reconstruct cloud-occluded Landsat LST rasters and run the
// accompanying evaluation and analytics commands.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "island/island.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonOpts {
    std::string manifest_path;
    std::string config_path;
    std::string mode = "m1";
    island::RunConfig config;

    void add_to(CLI::App* app) {
        app->add_option("--manifest", manifest_path, "Dataset manifest (JSON)")
            ->required();
        app->add_option("--config", config_path, "Config file (JSON)");
        app->add_option("--mode", mode, "Reconstruction mode m1..m5");
        app->add_option("--window", config.spatial.window,
                        "Spatial filter window side length (odd)");
        app->add_option("--theta-star", config.spatial.theta_star,
                        "Local/global spatial switch threshold");
        app->add_option("--refs", config.temporal.reference_count,
                        "Number of temporal reference frames");
        app->add_option("--bracket", config.temporal.bracket_cycles,
                        "Seasonal bracket duration in revisit cycles");
        app->add_option("--theta-max", config.temporal.theta_max,
                        "Maximum tolerable reference occlusion");
        app->add_option("--threads", config.threads, "Worker threads (0 = auto)");
        app->add_flag("--crop-to-valid", config.crop_to_valid,
                      "Exclude fill pixels from the theta denominator");
        app->add_flag("--include-dilated", config.qa.include_dilated,
                      "Treat dilated-cloud QA bits as contamination");
    }

    island::SceneCatalog load() {
        if (!config_path.empty()) {
            // file first, then re-apply CLI values on top via parse order:
            // CLI11 already wrote flag values into config, so stash them.
            island::RunConfig flags = config;
            config = island::RunConfig{};
            config.merge_file(config_path);
            // flags that differ from defaults win
            island::RunConfig defaults;
            if (flags.spatial.window != defaults.spatial.window)
                config.spatial.window = flags.spatial.window;
            if (flags.spatial.theta_star != defaults.spatial.theta_star)
                config.spatial.theta_star = flags.spatial.theta_star;
            if (flags.temporal.reference_count != defaults.temporal.reference_count)
                config.temporal.reference_count = flags.temporal.reference_count;
            if (flags.temporal.bracket_cycles != defaults.temporal.bracket_cycles)
                config.temporal.bracket_cycles = flags.temporal.bracket_cycles;
            if (flags.temporal.theta_max != defaults.temporal.theta_max)
                config.temporal.theta_max = flags.temporal.theta_max;
            if (flags.threads != defaults.threads) config.threads = flags.threads;
            if (flags.crop_to_valid) config.crop_to_valid = true;
            if (flags.qa.include_dilated) config.qa.include_dilated = true;
        }
        config.mode = island::parse_mode(mode);
        config.spatial.threads = config.threads;
        config.validate();
        manifest = island::DatasetManifest::load(manifest_path);
        return island::load_catalog(manifest, config.qa);
    }

    island::DatasetManifest manifest;
};

std::string csv_escape(const std::string& s) {
    if (s.find(',') == std::string::npos && s.find('"') == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

int cmd_reconstruct(CommonOpts& opts, const std::string& date_str, bool all,
                    const std::string& out_dir, bool emit_provenance) {
    island::SceneCatalog catalog = opts.load();
    std::vector<const island::Scene*> targets;
    if (all) {
        for (const auto& s : catalog.scenes) targets.push_back(&s);
    } else {
        const island::Date d = island::Date::parse(date_str);
        const island::Scene* s = catalog.find(d);
        if (!s) {
            std::string avail;
            for (const auto& x : catalog.dates())
                avail += (avail.empty() ? "" : ", ") + x;
            std::cerr << "error: date " << date_str
                      << " not in manifest; available: " << avail << "\n";
            return 2;
        }
        targets.push_back(s);
    }

    const fs::path region_dir = fs::path(out_dir) / opts.manifest.region;
    fs::create_directories(region_dir);
    std::ofstream report(region_dir / "report.jsonl");

    struct DateResult {
        json record;
        bool ok = false;
        bool skipped = false;
    };
    std::vector<DateResult> results(targets.size());

    const unsigned threads =
        opts.config.threads == 0 ? island::default_threads() : opts.config.threads;
    const bool parallel_dates = all && targets.size() > 1;
    island::SpatialParams sp = opts.config.spatial;
    if (parallel_dates) sp.threads = 1;  // per-date jobs carry the parallelism

    auto run_one = [&](std::size_t i) {
        const island::Scene& target = *targets[i];
        json rec;
        rec["date"] = target.date.to_string();
        rec["theta"] = opts.config.crop_to_valid
                           ? island::occlusion_factor_cropped(target.mask, target.lst)
                           : target.theta;
        rec["mode"] = island::mode_name(opts.config.mode);
        const auto t0 = std::chrono::steady_clock::now();
        try {
            auto result = island::reconstruct(catalog, target, opts.config.mode, sp,
                                              opts.config.temporal);
            const fs::path out_tif =
                region_dir / (target.date.to_string() + "_lst_reconstructed.tif");
            island::write_lst(result.output, out_tif.string());
            if (emit_provenance) {
                const fs::path prov_tif =
                    region_dir / (target.date.to_string() + "_provenance.tif");
                island::write_uint8(result.provenance, prov_tif.string());
            }
            json refs = json::array();
            for (const auto& d : result.references_used) refs.push_back(d.to_string());
            rec["references"] = refs;
            rec["degraded_to_spatial"] = result.degraded_to_spatial;
            rec["output"] = out_tif.string();
            rec["status"] = "ok";
            results[i].ok = true;
        } catch (const island::GridError& e) {
            const std::string what = e.what();
            if (what.find("serviceability") != std::string::npos) {
                rec["status"] = "skipped";
                rec["reason"] = "exceeds serviceability bound";
                results[i].skipped = true;
            } else {
                rec["status"] = "failed";
                rec["reason"] = what;
            }
        }
        const auto t1 = std::chrono::steady_clock::now();
        rec["elapsed_ms"] =
            std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
        results[i].record = rec;
    };

    if (parallel_dates) {
        island::parallel_for(targets.size(), threads, [&](std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i) run_one(i);
        });
    } else {
        for (std::size_t i = 0; i < targets.size(); ++i) run_one(i);
    }

    std::size_t ok = 0, skipped = 0;
    for (const auto& r : results) {
        report << r.record.dump() << "\n";
        std::cout << r.record["date"].get<std::string>() << ": "
                  << r.record["status"].get<std::string>();
        if (r.record.contains("reason"))
            std::cout << " (" << r.record["reason"].get<std::string>() << ")";
        std::cout << "\n";
        ok += r.ok ? 1 : 0;
        skipped += r.skipped ? 1 : 0;
    }
    if (ok + skipped == results.size()) return 0;
    return ok == 0 ? 1 : 1;
}

int cmd_simulate(CommonOpts& opts, const island::OcclusionSpec& spec,
                 std::vector<std::string> mode_names, const std::string& out_csv) {
    island::SceneCatalog catalog = opts.load();
    if (mode_names.empty()) mode_names = {"m1", "m2", "m3", "m4", "m5"};
    std::vector<island::ReconstructionMode> modes;
    for (const auto& m : mode_names) modes.push_back(island::parse_mode(m));

    const auto reports = island::ablation_suite(catalog, spec, modes,
                                                opts.config.spatial,
                                                opts.config.temporal);

    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!out_csv.empty()) {
        file.open(out_csv);
        if (!file) {
            std::cerr << "error: cannot open " << out_csv << "\n";
            return 2;
        }
        out = &file;
    }
    *out << "region,date,mode,occlusion_size,occlusion_count,seed,pixels,mae_k,"
            "rmse_k,bias_k,error\n";
    for (const auto& r : reports) {
        char buf[256];
        std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6f", r.mae, r.rmse, r.bias);
        *out << opts.manifest.region << "," << r.scene_date << "," << r.mode << ","
             << r.occlusion_size << "," << r.occlusion_count << "," << r.seed << ","
             << r.pixels << "," << (r.error.empty() ? buf : ",,") << ","
             << csv_escape(r.error) << "\n";
    }
    if (!out_csv.empty()) {
        // table on stdout for humans
        std::printf("%-12s %-4s %10s %10s %10s %8s\n", "date", "mode", "MAE(K)",
                    "RMSE(K)", "bias(K)", "pixels");
        for (const auto& r : reports) {
            if (!r.error.empty()) {
                std::printf("%-12s %-4s failed: %s\n", r.scene_date.c_str(),
                            r.mode.c_str(), r.error.c_str());
                continue;
            }
            std::printf("%-12s %-4s %10.3f %10.3f %10.3f %8llu\n", r.scene_date.c_str(),
                        r.mode.c_str(), r.mae, r.rmse, r.bias,
                        static_cast<unsigned long long>(r.pixels));
        }
    }
    for (const auto& r : reports)
        if (!r.error.empty()) return 1;
    return 0;
}

int cmd_insitu(CommonOpts& opts, const std::string& records_path,
               std::vector<std::size_t> pixel, long long window_seconds, int footprint,
               const std::string& out_csv) {
    island::SceneCatalog catalog = opts.load();
    island::StationFile stations = island::read_station_records(records_path);

    island::InsituParams params;
    if (pixel.size() == 2) {
        params.pixel_row = pixel[0];
        params.pixel_col = pixel[1];
    } else {
        std::cerr << "error: --pixel expects ROW COL\n";
        return 2;
    }
    params.match_window_seconds = window_seconds;
    params.footprint = footprint;

    const auto report = island::insitu_validate(catalog, stations.records, params,
                                                opts.config.spatial,
                                                opts.config.temporal);

    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!out_csv.empty()) {
        file.open(out_csv);
        out = &file;
    }
    *out << "date,sky,satellite_k,station_k\n";
    for (const auto& p : report.pairs) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "%.4f,%.4f", p.satellite, p.station);
        *out << p.scene_date << "," << (p.cloudy ? "cloudy" : "clear") << "," << buf
             << "\n";
    }
    std::printf("clear-sky:  pairs=%llu rmse=%.3f bias=%.3f\n",
                static_cast<unsigned long long>(report.clear_sky.pairs),
                report.clear_sky.rmse, report.clear_sky.bias);
    std::printf("cloudy-sky: pairs=%llu rmse=%.3f bias=%.3f\n",
                static_cast<unsigned long long>(report.cloudy_sky.pairs),
                report.cloudy_sky.rmse, report.cloudy_sky.bias);
    std::printf("skipped scenes: %llu; unparsable records: %llu\n",
                static_cast<unsigned long long>(report.skipped_scenes),
                static_cast<unsigned long long>(stations.skipped));
    return 0;
}

int cmd_series(CommonOpts& opts, const std::string& out_csv) {
    island::SceneCatalog catalog = opts.load();
    std::vector<island::ClassSeriesRow> rows;
    for (const auto& scene : catalog.scenes) {
        if (scene.theta >= island::kServiceabilityBound) continue;
        const auto rec = island::reconstruct(catalog, scene, opts.config.mode,
                                             opts.config.spatial, opts.config.temporal);
        auto r = island::class_series_rows(scene.date.to_string(), rec.output,
                                           catalog.land);
        rows.insert(rows.end(), r.begin(), r.end());
    }
    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!out_csv.empty()) {
        file.open(out_csv);
        out = &file;
    }
    *out << "date,class_code,class_name,mean_k,pixels\n";
    for (const auto& r : rows) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.4f", r.mean_kelvin);
        *out << r.date << "," << r.class_code << "," << csv_escape(r.class_name) << ","
             << buf << "," << r.pixels << "\n";
    }
    return 0;
}

int cmd_heatdays(CommonOpts& opts, double threshold, const std::string& out_tif) {
    island::SceneCatalog catalog = opts.load();
    std::vector<island::LstGrid> grids;
    for (const auto& scene : catalog.scenes) {
        if (scene.theta >= island::kServiceabilityBound) continue;
        grids.push_back(island::reconstruct(catalog, scene, opts.config.mode,
                                            opts.config.spatial, opts.config.temporal)
                            .output);
    }
    const auto counts = island::heatday_counts(grids, threshold);
    island::write_uint16(counts, out_tif);
    std::cout << "wrote " << out_tif << " (" << grids.size() << " scenes, threshold "
              << threshold << " K)\n";
    return 0;
}

int cmd_catalog(CommonOpts& opts) {
    island::SceneCatalog catalog = opts.load();
    std::printf("region: %s  scenes: %zu  cycle: %d days\n",
                opts.manifest.region.c_str(), catalog.scenes.size(),
                catalog.cycle_days);
    for (const auto& s : catalog.scenes) {
        std::printf("%s  theta=%.4f  %s\n", s.date.to_string().c_str(), s.theta,
                    s.theta >= island::kServiceabilityBound ? "(over bound)" : "");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"island: land-cover-aware LST cloud-gap reconstruction"};
    app.require_subcommand(1);

    CommonOpts opts;

    auto* rec = app.add_subcommand("reconstruct", "Reconstruct occluded scenes");
    opts.add_to(rec);
    std::string date_str, out_dir = ".";
    bool all = false, provenance = false;
    rec->add_option("--date", date_str, "Target date YYYY-MM-DD");
    rec->add_flag("--all", all, "Reconstruct every serviceable scene");
    rec->add_option("--out", out_dir, "Output directory");
    rec->add_flag("--provenance", provenance, "Also write a provenance raster");

    auto* sim = app.add_subcommand("simulate", "Artificial-occlusion evaluation");
    CommonOpts sim_opts;
    sim_opts.add_to(sim);
    island::OcclusionSpec spec;
    std::vector<std::string> sim_modes;
    std::string sim_csv;
    sim->add_option("--occlusion-size", spec.size, "Square side length s (pixels)");
    sim->add_option("--occlusion-count", spec.max_count, "Maximum squares n");
    sim->add_option("--seed", spec.seed, "RNG seed");
    sim->add_option("--modes", sim_modes, "Modes to evaluate (default m1..m5)");
    sim->add_option("--out", sim_csv, "CSV output path");

    auto* ins = app.add_subcommand("insitu", "Validate against station records");
    CommonOpts ins_opts;
    ins_opts.add_to(ins);
    std::string records_path, ins_csv;
    std::vector<std::size_t> pixel;
    long long window_seconds = 600;
    int footprint = 1;
    ins->add_option("--records", records_path, "Station record CSV")->required();
    ins->add_option("--pixel", pixel, "Station pixel ROW COL")->expected(2);
    ins->add_option("--window-seconds", window_seconds, "Matching window (+/- s)");
    ins->add_option("--footprint", footprint, "k x k pixel mean window (odd)");
    ins->add_option("--out", ins_csv, "CSV output path");

    auto* ser = app.add_subcommand("series", "Per-class mean LST time series");
    CommonOpts ser_opts;
    ser_opts.add_to(ser);
    std::string ser_csv;
    ser->add_option("--out", ser_csv, "CSV output path");

    auto* heat = app.add_subcommand("heatdays", "Threshold-exceedance count map");
    CommonOpts heat_opts;
    heat_opts.add_to(heat);
    double threshold = 308.15;
    std::string heat_tif = "heatdays.tif";
    heat->add_option("--threshold", threshold, "LST threshold in kelvin")->required();
    heat->add_option("--out", heat_tif, "Output GeoTIFF path");

    auto* cat = app.add_subcommand("catalog", "List scenes and occlusion factors");
    CommonOpts cat_opts;
    cat_opts.add_to(cat);

    CLI11_PARSE(app, argc, argv);

    try {
        if (rec->parsed()) {
            if (!all && date_str.empty()) {
                std::cerr << "error: need --date or --all\n";
                return 2;
            }
            return cmd_reconstruct(opts, date_str, all, out_dir, provenance);
        }
        if (sim->parsed()) return cmd_simulate(sim_opts, spec, sim_modes, sim_csv);
        if (ins->parsed())
            return cmd_insitu(ins_opts, records_path, pixel, window_seconds, footprint,
                              ins_csv);
        if (ser->parsed()) return cmd_series(ser_opts, ser_csv);
        if (heat->parsed()) return cmd_heatdays(heat_opts, threshold, heat_tif);
        if (cat->parsed()) return cmd_catalog(cat_opts);
    } catch (const island::GridError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
