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
#ifndef ISLAND_GEOTIFF_HPP
#define ISLAND_GEOTIFF_HPP

// Minimal GeoTIFF codec: classic little-endian TIFF, uncompressed strips,
// contiguous planar layout, uint8/uint16/float32 samples, GeoTIFF
// ModelPixelScale/ModelTiepoint/GeoKey tags and the GDAL_NODATA tag.
// Covers what this pipeline reads and everything it writes.

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "island/grid.hpp"

namespace island {
namespace tiff {

enum class SampleType { UInt8, UInt16, Float32 };

inline std::size_t sample_bytes(SampleType t) {
    switch (t) {
        case SampleType::UInt8: return 1;
        case SampleType::UInt16: return 2;
        case SampleType::Float32: return 4;
    }
    return 0;
}

/// Decoded single-band raster plus file-level metadata.
struct Raster {
    GridShape shape;
    GeoRef georef;
    SampleType type = SampleType::Float32;
    std::size_t samples_per_pixel = 1;
    std::optional<double> nodata;
    std::vector<double> values;  // one band, row-major, widened to double
};

namespace detail {

struct Entry {
    std::uint16_t type = 0;
    std::uint32_t count = 0;
    std::uint32_t value = 0;  // inline value or offset
};

class Reader {
  public:
    explicit Reader(const std::string& path) : path_(path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw GridError("cannot open file: " + path);
        bytes_.assign(std::istreambuf_iterator<char>(in), {});
        if (bytes_.size() < 8) throw GridError("not a TIFF file: " + path);
        if (bytes_[0] == 'M' && bytes_[1] == 'M')
            throw GridError("big-endian TIFF not supported: " + path);
        if (bytes_[0] != 'I' || bytes_[1] != 'I' || u16(2) != 42)
            throw GridError("not a TIFF file: " + path);
        parse_ifd(u32(4));
    }

    const Entry* find(std::uint16_t tag) const {
        auto it = entries_.find(tag);
        return it == entries_.end() ? nullptr : &it->second;
    }

    std::vector<std::uint64_t> ints(const Entry& e) const {
        std::vector<std::uint64_t> out;
        const std::size_t sz = type_size(e.type);
        const std::size_t total = sz * e.count;
        std::size_t off = total <= 4 ? 0 : e.value;
        for (std::uint32_t i = 0; i < e.count; ++i) {
            std::size_t at = total <= 4 ? 0 : off + i * sz;
            if (total <= 4) {
                // inline: reinterpret the 4 value bytes
                std::uint32_t v = e.value;
                if (sz == 1) out.push_back((v >> (8 * i)) & 0xff);
                else if (sz == 2) out.push_back((v >> (16 * i)) & 0xffff);
                else out.push_back(v);
            } else {
                if (sz == 1) out.push_back(u8(at));
                else if (sz == 2) out.push_back(u16(at));
                else out.push_back(u32(at));
            }
        }
        return out;
    }

    std::vector<double> doubles(const Entry& e) const {
        if (e.type != 12) throw GridError("expected DOUBLE tag in " + path_);
        std::vector<double> out;
        for (std::uint32_t i = 0; i < e.count; ++i) {
            double d;
            check(e.value + i * 8 + 8);
            std::memcpy(&d, bytes_.data() + e.value + i * 8, 8);
            out.push_back(d);
        }
        return out;
    }

    std::string ascii(const Entry& e) const {
        std::string s;
        if (e.count <= 4) {
            const char* p = reinterpret_cast<const char*>(&e.value);
            s.assign(p, p + e.count);
        } else {
            check(e.value + e.count);
            s.assign(reinterpret_cast<const char*>(bytes_.data() + e.value), e.count);
        }
        while (!s.empty() && (s.back() == '\0' || s.back() == '|')) s.pop_back();
        return s;
    }

    std::uint8_t u8(std::size_t at) const { check(at + 1); return bytes_[at]; }
    std::uint16_t u16(std::size_t at) const {
        check(at + 2);
        return static_cast<std::uint16_t>(bytes_[at] | (bytes_[at + 1] << 8));
    }
    std::uint32_t u32(std::size_t at) const {
        check(at + 4);
        return bytes_[at] | (bytes_[at + 1] << 8) | (bytes_[at + 2] << 16) |
               (static_cast<std::uint32_t>(bytes_[at + 3]) << 24);
    }
    float f32(std::size_t at) const {
        check(at + 4);
        float f;
        std::memcpy(&f, bytes_.data() + at, 4);
        return f;
    }
    const std::string& path() const { return path_; }

  private:
    static std::size_t type_size(std::uint16_t t) {
        switch (t) {
            case 1: case 2: case 6: case 7: return 1;  // BYTE/ASCII/SBYTE/UNDEF
            case 3: case 8: return 2;                  // SHORT
            case 4: case 9: case 11: return 4;         // LONG, FLOAT
            case 5: case 10: case 12: return 8;        // RATIONAL, DOUBLE
            default: return 1;
        }
    }
    void parse_ifd(std::uint32_t off) {
        const std::uint16_t n = u16(off);
        for (std::uint16_t i = 0; i < n; ++i) {
            const std::size_t at = off + 2 + i * 12u;
            Entry e;
            const std::uint16_t tag = u16(at);
            e.type = u16(at + 2);
            e.count = u32(at + 4);
            e.value = u32(at + 8);
            entries_[tag] = e;
        }
    }
    void check(std::size_t end) const {
        if (end > bytes_.size())
            throw GridError("truncated TIFF file: " + path_);
    }

    std::string path_;
    std::vector<std::uint8_t> bytes_;
    std::map<std::uint16_t, Entry> entries_;
};

}  // namespace detail

/// Reads one band of a GeoTIFF. Fails on missing georeferencing,
/// compressed data, or unsupported sample layouts.
inline Raster read_raster(const std::string& path, std::size_t band = 0) {
    if (!std::filesystem::exists(path))
        throw GridError("missing file: " + path);
    detail::Reader r(path);

    auto require = [&](std::uint16_t tag, const char* name) -> const detail::Entry& {
        const auto* e = r.find(tag);
        if (!e) throw GridError(std::string("TIFF missing tag ") + name + ": " + path);
        return *e;
    };

    Raster out;
    out.shape.width = r.ints(require(256, "ImageWidth"))[0];
    out.shape.height = r.ints(require(257, "ImageLength"))[0];
    out.shape.validate();

    if (const auto* e = r.find(259); e && r.ints(*e)[0] != 1)
        throw GridError("compressed TIFF not supported: " + path);
    if (const auto* e = r.find(284); e && r.ints(*e)[0] != 1)
        throw GridError("planar (non-contiguous) TIFF not supported: " + path);

    out.samples_per_pixel = r.find(277) ? r.ints(*r.find(277))[0] : 1;
    if (band >= out.samples_per_pixel)
        throw GridError("band " + std::to_string(band) + " out of range (" +
                        std::to_string(out.samples_per_pixel) + " bands): " + path);

    const auto bits = r.ints(require(258, "BitsPerSample"));
    const std::uint64_t bps = bits[0];
    std::uint64_t fmt = 1;
    if (const auto* e = r.find(339)) fmt = r.ints(*e)[0];
    if (bps == 8 && fmt == 1) out.type = SampleType::UInt8;
    else if (bps == 16 && fmt == 1) out.type = SampleType::UInt16;
    else if (bps == 32 && fmt == 3) out.type = SampleType::Float32;
    else
        throw GridError("unsupported sample type (bits=" + std::to_string(bps) +
                        ", format=" + std::to_string(fmt) + "): " + path);

    // Georeferencing: pixel scale + tiepoint are mandatory for this pipeline.
    const auto* scale_e = r.find(33550);
    const auto* tie_e = r.find(33922);
    if (!scale_e || !tie_e)
        throw GridError("missing georeferencing (ModelPixelScale/ModelTiepoint): " + path);
    const auto scale = r.doubles(*scale_e);
    const auto tie = r.doubles(*tie_e);
    if (scale.size() < 2 || tie.size() < 6)
        throw GridError("malformed georeferencing tags: " + path);
    out.georef.pixel_size_x = scale[0];
    out.georef.pixel_size_y = scale[1];
    out.georef.origin_x = tie[3];
    out.georef.origin_y = tie[4];
    out.georef.validate();
    if (const auto* e = r.find(34735)) {
        const auto keys = r.ints(*e);
        std::string citation;
        std::uint64_t epsg = 0;
        for (std::size_t i = 4; i + 3 < keys.size(); i += 4) {
            const auto key = keys[i], loc = keys[i + 1], cnt = keys[i + 2], val = keys[i + 3];
            if ((key == 3072 || key == 2048) && loc == 0 && val != 32767)
                epsg = val;
            if (key == 1026 && loc == 34737) {
                if (const auto* a = r.find(34737)) {
                    std::string all = r.ascii(*a);
                    citation = all.substr(std::min<std::size_t>(val, all.size()),
                                          std::min<std::size_t>(cnt, all.size()));
                    while (!citation.empty() &&
                           (citation.back() == '\0' || citation.back() == '|'))
                        citation.pop_back();
                }
            }
        }
        if (epsg != 0) out.georef.crs_id = "EPSG:" + std::to_string(epsg);
        else out.georef.crs_id = citation;
    }

    if (const auto* e = r.find(42113)) {
        try {
            out.nodata = std::stod(r.ascii(*e));
        } catch (const std::exception&) {
            throw GridError("unparsable GDAL_NODATA tag: " + path);
        }
    }

    const auto offsets = r.ints(require(273, "StripOffsets"));
    const auto counts = r.ints(require(279, "StripByteCounts"));
    std::uint64_t rows_per_strip = out.shape.height;
    if (const auto* e = r.find(278)) rows_per_strip = r.ints(*e)[0];
    if (offsets.size() != counts.size())
        throw GridError("strip offset/count mismatch: " + path);

    const std::size_t px_bytes = sample_bytes(out.type) * out.samples_per_pixel;
    out.values.assign(out.shape.pixels(), 0.0);
    std::size_t row0 = 0;
    for (std::size_t s = 0; s < offsets.size(); ++s) {
        const std::size_t rows =
            std::min<std::size_t>(rows_per_strip, out.shape.height - row0);
        if (counts[s] < rows * out.shape.width * px_bytes)
            throw GridError("short strip in TIFF: " + path);
        for (std::size_t rr = 0; rr < rows; ++rr) {
            for (std::size_t c = 0; c < out.shape.width; ++c) {
                const std::size_t at = offsets[s] + (rr * out.shape.width + c) * px_bytes +
                                       band * sample_bytes(out.type);
                double v = 0.0;
                switch (out.type) {
                    case SampleType::UInt8: v = r.u8(at); break;
                    case SampleType::UInt16: v = r.u16(at); break;
                    case SampleType::Float32: v = r.f32(at); break;
                }
                out.values[(row0 + rr) * out.shape.width + c] = v;
            }
        }
        row0 += rows;
    }
    if (row0 != out.shape.height)
        throw GridError("TIFF strips do not cover image: " + path);
    return out;
}

namespace detail {

struct TagOut {
    std::uint16_t tag;
    std::uint16_t type;
    std::uint32_t count;
    std::uint32_t value;
};

class Writer {
  public:
    void u16(std::uint16_t v) { put(&v, 2); }
    void u32(std::uint32_t v) { put(&v, 4); }
    void f64(double v) { put(&v, 8); }
    void raw(const void* p, std::size_t n) { put(p, n); }
    std::size_t size() const { return out_.size(); }
    const std::vector<std::uint8_t>& bytes() const { return out_; }

  private:
    void put(const void* p, std::size_t n) {
        const auto* b = static_cast<const std::uint8_t*>(p);
        out_.insert(out_.end(), b, b + n);
    }
    std::vector<std::uint8_t> out_;
};

}  // namespace detail

/// Writes a single-band GeoTIFF: one uncompressed strip, little-endian,
/// ModelPixelScale + ModelTiepoint, GeoKeys for the CRS, optional
/// GDAL_NODATA. `data` holds raw sample bytes, row-major.
inline void write_raster(const std::string& path, GridShape shape, const GeoRef& georef,
                         SampleType type, const void* data,
                         std::optional<double> nodata = std::nullopt) {
    shape.validate();
    georef.validate();
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty() && !std::filesystem::exists(parent))
        throw GridError("parent directory does not exist: " + parent.string());

    const std::size_t px = sample_bytes(type);
    const std::size_t data_bytes = shape.pixels() * px;

    // CRS keys: EPSG code when the id parses, citation string otherwise.
    std::uint16_t epsg = 0;
    std::string citation;
    if (georef.crs_id.rfind("EPSG:", 0) == 0) {
        try {
            epsg = static_cast<std::uint16_t>(std::stoul(georef.crs_id.substr(5)));
        } catch (const std::exception&) {
            citation = georef.crs_id;
        }
    } else if (!georef.crs_id.empty()) {
        citation = georef.crs_id;
    }
    std::string ascii_params = citation;
    if (!ascii_params.empty()) ascii_params.push_back('\0');

    std::vector<std::uint16_t> geokeys;
    {
        std::vector<std::array<std::uint16_t, 4>> keys;
        keys.push_back({1024, 0, 1, 1});  // GTModelType = projected
        keys.push_back({1025, 0, 1, 1});  // RasterPixelIsArea
        if (epsg != 0) keys.push_back({3072, 0, 1, epsg});
        if (!citation.empty())
            keys.push_back({1026, 34737, static_cast<std::uint16_t>(citation.size()), 0});
        geokeys = {1, 1, 0, static_cast<std::uint16_t>(keys.size())};
        for (auto& k : keys) geokeys.insert(geokeys.end(), k.begin(), k.end());
    }

    std::string nodata_str;
    if (nodata) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%g", *nodata);
        nodata_str = buf;
        nodata_str.push_back('\0');
    }

    std::vector<detail::TagOut> tags;
    const std::uint16_t fmt = (type == SampleType::Float32) ? 3 : 1;
    const std::uint16_t bits = static_cast<std::uint16_t>(px * 8);

    // Layout: header(8) | IFD | external tag payloads | pixel data.
    auto add = [&](std::uint16_t tag, std::uint16_t tp, std::uint32_t count,
                   std::uint32_t value) { tags.push_back({tag, tp, count, value}); };

    // Reserve slots; external offsets patched below.
    add(256, 4, 1, static_cast<std::uint32_t>(shape.width));
    add(257, 4, 1, static_cast<std::uint32_t>(shape.height));
    add(258, 3, 1, bits);
    add(259, 3, 1, 1);  // no compression
    add(262, 3, 1, 1);  // BlackIsZero
    add(273, 4, 1, 0);  // StripOffsets (patched)
    add(277, 3, 1, 1);
    add(278, 4, 1, static_cast<std::uint32_t>(shape.height));
    add(279, 4, 1, static_cast<std::uint32_t>(data_bytes));
    add(284, 3, 1, 1);
    add(339, 3, 1, fmt);
    add(33550, 12, 3, 0);  // ModelPixelScale (patched)
    add(33922, 12, 6, 0);  // ModelTiepoint (patched)
    add(34735, 3, static_cast<std::uint32_t>(geokeys.size()), 0);  // patched
    if (!ascii_params.empty())
        add(34737, 2, static_cast<std::uint32_t>(ascii_params.size()), 0);
    if (!nodata_str.empty())
        add(42113, 2, static_cast<std::uint32_t>(nodata_str.size()), 0);

    const std::size_t ifd_at = 8;
    const std::size_t ifd_bytes = 2 + tags.size() * 12 + 4;
    std::size_t ext_at = ifd_at + ifd_bytes;
    auto alloc_ext = [&](std::size_t n) {
        const std::size_t at = ext_at;
        ext_at += (n + 1) & ~std::size_t{1};  // word alignment
        return static_cast<std::uint32_t>(at);
    };

    std::uint32_t scale_at = alloc_ext(3 * 8);
    std::uint32_t tie_at = alloc_ext(6 * 8);
    std::uint32_t keys_at = alloc_ext(geokeys.size() * 2);
    std::uint32_t ascii_at = ascii_params.empty() ? 0 : alloc_ext(ascii_params.size());
    std::uint32_t nodata_at = 0;
    if (!nodata_str.empty()) {
        if (nodata_str.size() <= 4) {
            std::uint32_t inline_v = 0;
            std::memcpy(&inline_v, nodata_str.data(), nodata_str.size());
            nodata_at = inline_v;  // stored inline
        } else {
            nodata_at = alloc_ext(nodata_str.size());
        }
    }
    const std::uint32_t data_at = static_cast<std::uint32_t>(ext_at);

    for (auto& t : tags) {
        switch (t.tag) {
            case 273: t.value = data_at; break;
            case 33550: t.value = scale_at; break;
            case 33922: t.value = tie_at; break;
            case 34735: t.value = keys_at; break;
            case 34737: t.value = ascii_at; break;
            case 42113: t.value = nodata_at; break;
            default: break;
        }
    }

    detail::Writer w;
    w.u16(0x4949);  // "II"
    w.u16(42);
    w.u32(static_cast<std::uint32_t>(ifd_at));
    w.u16(static_cast<std::uint16_t>(tags.size()));
    for (const auto& t : tags) {
        w.u16(t.tag);
        w.u16(t.type);
        w.u32(t.count);
        w.u32(t.value);
    }
    w.u32(0);  // no next IFD

    auto pad_to = [&](std::size_t at) {
        while (w.size() < at) { std::uint8_t z = 0; w.raw(&z, 1); }
    };
    pad_to(scale_at);
    w.f64(georef.pixel_size_x);
    w.f64(georef.pixel_size_y);
    w.f64(0.0);
    pad_to(tie_at);
    for (double v : {0.0, 0.0, 0.0, georef.origin_x, georef.origin_y, 0.0}) w.f64(v);
    pad_to(keys_at);
    for (std::uint16_t k : geokeys) w.u16(k);
    if (!ascii_params.empty()) {
        pad_to(ascii_at);
        w.raw(ascii_params.data(), ascii_params.size());
    }
    if (!nodata_str.empty() && nodata_str.size() > 4) {
        pad_to(nodata_at);
        w.raw(nodata_str.data(), nodata_str.size());
    }
    pad_to(data_at);
    w.raw(data, data_bytes);

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw GridError("cannot open for writing: " + path);
    out.write(reinterpret_cast<const char*>(w.bytes().data()),
              static_cast<std::streamsize>(w.bytes().size()));
    if (!out) throw GridError("write failure: " + path);
}

}  // namespace tiff

/// DN-to-kelvin conversion applied to integer-typed files only; float32
/// files are taken as kelvin directly. Defaults are the Collection 2
/// Level-2 surface-temperature band scaling.
struct DnScaling {
    double scale = 0.00341802;
    double offset = 149.0;
};

inline LstGrid read_lst(const std::string& path, std::size_t band = 0,
                        DnScaling dn = {}) {
    tiff::Raster r = tiff::read_raster(path, band);
    LstGrid g(r.shape, r.georef);
    const bool is_float = r.type == tiff::SampleType::Float32;
    for (std::size_t i = 0; i < r.values.size(); ++i) {
        const double raw = r.values[i];
        if (r.nodata && raw == *r.nodata) continue;
        if (!std::isfinite(raw)) continue;
        const double kelvin = is_float ? raw : raw * dn.scale + dn.offset;
        g.values[i] = static_cast<float>(kelvin);
        g.valid[i] = 1;
    }
    return g;
}

inline LandCoverGrid read_land_cover(const std::string& path, std::size_t band = 0) {
    tiff::Raster r = tiff::read_raster(path, band);
    LandCoverGrid g(r.shape, r.georef);
    for (std::size_t i = 0; i < r.values.size(); ++i)
        g.classes[i] = static_cast<std::uint16_t>(r.values[i]);
    return g;
}

inline Grid<std::uint16_t> read_bitfield(const std::string& path, std::size_t band = 0) {
    tiff::Raster r = tiff::read_raster(path, band);
    Grid<std::uint16_t> g(r.shape, r.georef);
    for (std::size_t i = 0; i < r.values.size(); ++i)
        g.data[i] = static_cast<std::uint16_t>(r.values[i]);
    return g;
}

inline void write_lst(const LstGrid& g, const std::string& path) {
    std::vector<float> buf(g.values);
    for (std::size_t i = 0; i < buf.size(); ++i)
        if (!g.valid[i]) buf[i] = kLstNodata;
    tiff::write_raster(path, g.shape, g.georef, tiff::SampleType::Float32, buf.data(),
                       static_cast<double>(kLstNodata));
}

inline void write_uint8(const Grid<std::uint8_t>& g, const std::string& path,
                        std::optional<double> nodata = std::nullopt) {
    tiff::write_raster(path, g.shape, g.georef, tiff::SampleType::UInt8, g.data.data(),
                       nodata);
}

inline void write_uint16(const Grid<std::uint16_t>& g, const std::string& path,
                         std::optional<double> nodata = std::nullopt) {
    tiff::write_raster(path, g.shape, g.georef, tiff::SampleType::UInt16, g.data.data(),
                       nodata);
}

inline void write_land_cover(const LandCoverGrid& g, const std::string& path) {
    bool fits8 = true;
    for (auto c : g.classes)
        if (c > 255) { fits8 = false; break; }
    if (fits8) {
        std::vector<std::uint8_t> buf(g.classes.begin(), g.classes.end());
        tiff::write_raster(path, g.shape, g.georef, tiff::SampleType::UInt8, buf.data());
    } else {
        tiff::write_raster(path, g.shape, g.georef, tiff::SampleType::UInt16,
                           g.classes.data());
    }
}

}  // namespace island

#endif  // ISLAND_GEOTIFF_HPP
