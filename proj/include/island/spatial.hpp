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
#ifndef ISLAND_SPATIAL_HPP
#define ISLAND_SPATIAL_HPP

#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <set>
#include <vector>

#include "island/parallel.hpp"
#include "island/scene.hpp"

namespace island {

struct SpatialParams {
    int window = 75;           // side length f of the local neighborhood, odd
    double theta_star = 0.5;   // local/global switch threshold
    unsigned threads = 0;      // 0 = hardware concurrency

    double sigma() const { return window / 2.0; }

    void validate() const {
        if (window < 3 || window % 2 == 0)
            throw GridError("SpatialParams: window must be odd and >= 3");
        if (!(theta_star > 0.0 && theta_star <= 1.0))
            throw GridError("SpatialParams: theta_star must be in (0, 1]");
    }
};

/// Isotropic 2-D Gaussian of distance x. The 1/(2*pi*sigma^2) constant
/// cancels in the normalized filter but is kept so the function matches
/// its textbook form.
inline double gaussian_weight(double x, double sigma) {
    if (x < 0.0 || sigma <= 0.0)
        throw GridError("gaussian_weight: require x >= 0 and sigma > 0");
    const double s2 = sigma * sigma;
    return std::exp(-(x * x) / (2.0 * s2)) / (2.0 * std::numbers::pi * s2);
}

/// Per-class mean temperature over clear pixels.
struct ClassMeans {
    std::map<std::uint16_t, double> mean;
    std::map<std::uint16_t, std::uint64_t> count;

    bool has(std::uint16_t c) const { return mean.count(c) != 0; }
};

namespace detail {

inline bool is_clear(const Scene& scene, std::size_t i) {
    return !scene.mask.occluded[i] && scene.lst.valid[i];
}

}  // namespace detail

inline ClassMeans class_means(const Scene& scene, const LandCoverGrid& land) {
    check_aligned_named({"lst", "land"}, scene.lst, land);
    std::map<std::uint16_t, double> sum;
    std::map<std::uint16_t, std::uint64_t> cnt;
    for (std::size_t i = 0; i < scene.lst.size(); ++i) {
        if (!detail::is_clear(scene, i)) continue;
        sum[land.classes[i]] += scene.lst.values[i];
        ++cnt[land.classes[i]];
    }
    ClassMeans out;
    for (const auto& [c, s] : sum) out.mean[c] = s / static_cast<double>(cnt[c]);
    out.count = cnt;
    return out;
}

/// How each reconstructed pixel was produced.
enum class FillSource : std::uint8_t {
    Observed = 0,
    LocalFilter = 1,
    ClassMean = 2,
    GlobalMean = 3,
};

namespace detail {

/// Normalized convolution for one class: separable truncated-Gaussian
/// convolution of (value * clear * class) and (clear * class), then the
/// ratio. Algebraically identical to the direct windowed sum because
/// the isotropic kernel factors into exp(-dx^2/2s^2) * exp(-dy^2/2s^2)
/// and the normalization divides out every constant.
class ClassFilter {
  public:
    ClassFilter(const Scene& scene, const LandCoverGrid& land,
                const SpatialParams& params, std::uint16_t cls, unsigned threads)
        : h_(scene.lst.shape.height), w_(scene.lst.shape.width) {
        const int radius = (params.window - 1) / 2;
        const double s2 = params.sigma() * params.sigma();
        kernel_.resize(radius + 1);
        for (int k = 0; k <= radius; ++k)
            kernel_[k] = std::exp(-(static_cast<double>(k) * k) / (2.0 * s2));

        std::vector<double> num(h_ * w_, 0.0), den(h_ * w_, 0.0);
        for (std::size_t i = 0; i < scene.lst.size(); ++i) {
            if (land.classes[i] == cls && is_clear(scene, i)) {
                num[i] = scene.lst.values[i];
                den[i] = 1.0;
            }
        }
        num_ = convolve(num, radius, threads);
        den_ = convolve(den, radius, threads);
    }

    /// Weight sum alpha (up to the cancelled constant) at a pixel.
    double alpha(std::size_t row, std::size_t col) const {
        return den_[row * w_ + col];
    }
    double predict(std::size_t row, std::size_t col) const {
        return num_[row * w_ + col] / den_[row * w_ + col];
    }

  private:
    std::vector<double> convolve(const std::vector<double>& in, int radius,
                                 unsigned threads) const {
        std::vector<double> mid(in.size(), 0.0), out(in.size(), 0.0);
        // horizontal pass
        parallel_for(h_, threads, [&](std::size_t r0, std::size_t r1) {
            for (std::size_t r = r0; r < r1; ++r) {
                const double* src = in.data() + r * w_;
                double* dst = mid.data() + r * w_;
                for (std::size_t c = 0; c < w_; ++c) {
                    const int lo = -std::min<int>(radius, static_cast<int>(c));
                    const int hi = std::min<int>(radius, static_cast<int>(w_ - 1 - c));
                    double acc = 0.0;
                    for (int k = lo; k <= hi; ++k)
                        acc += kernel_[k < 0 ? -k : k] * src[static_cast<int>(c) + k];
                    dst[c] = acc;
                }
            }
        });
        // vertical pass
        parallel_for(w_, threads, [&](std::size_t c0, std::size_t c1) {
            for (std::size_t c = c0; c < c1; ++c) {
                for (std::size_t r = 0; r < h_; ++r) {
                    const int lo = -std::min<int>(radius, static_cast<int>(r));
                    const int hi = std::min<int>(radius, static_cast<int>(h_ - 1 - r));
                    double acc = 0.0;
                    for (int k = lo; k <= hi; ++k)
                        acc += kernel_[k < 0 ? -k : k] *
                               mid[(static_cast<std::size_t>(static_cast<int>(r) + k)) * w_ + c];
                    out[r * w_ + c] = acc;
                }
            }
        });
        return out;
    }

    std::size_t h_, w_;
    std::vector<double> kernel_;
    std::vector<double> num_, den_;
};

inline double global_clear_mean(const Scene& scene) {
    double sum = 0.0;
    std::uint64_t n = 0;
    for (std::size_t i = 0; i < scene.lst.size(); ++i) {
        if (!is_clear(scene, i)) continue;
        sum += scene.lst.values[i];
        ++n;
    }
    if (n == 0) throw GridError("image fully occluded: no clear pixels");
    return sum / static_cast<double>(n);
}

}  // namespace detail

struct SpatialResult {
    LstGrid output;
    Grid<std::uint8_t> source;  // FillSource per pixel
};

/// Local filtering branch: every pixel needing fill gets the Gaussian
/// same-class weighted average over its window; empty neighborhoods
/// fall back to the class mean, then the global clear mean.
inline SpatialResult local_filter(const Scene& scene, const LandCoverGrid& land,
                                  const SpatialParams& params) {
    params.validate();
    check_aligned_named({"lst", "mask", "land"}, scene.lst, scene.mask, land);
    const unsigned threads = params.threads == 0 ? default_threads() : params.threads;
    const double fallback_mean = detail::global_clear_mean(scene);
    const ClassMeans means = class_means(scene, land);

    const GridShape shape = scene.lst.shape;
    SpatialResult res{scene.lst, Grid<std::uint8_t>(shape, scene.lst.georef,
                                                    std::uint8_t(FillSource::Observed))};

    std::set<std::uint16_t> fill_classes;
    for (std::size_t r = 0; r < shape.height; ++r)
        for (std::size_t c = 0; c < shape.width; ++c)
            if (scene.needs_fill(r, c)) fill_classes.insert(land.at(r, c));

    for (std::uint16_t cls : fill_classes) {
        detail::ClassFilter filt(scene, land, params, cls, threads);
        parallel_for(shape.height, threads, [&](std::size_t r0, std::size_t r1) {
            for (std::size_t r = r0; r < r1; ++r) {
                for (std::size_t c = 0; c < shape.width; ++c) {
                    if (land.at(r, c) != cls || !scene.needs_fill(r, c)) continue;
                    double v;
                    FillSource src;
                    if (filt.alpha(r, c) > 0.0) {
                        v = filt.predict(r, c);
                        src = FillSource::LocalFilter;
                    } else if (means.has(cls)) {
                        v = means.mean.at(cls);
                        src = FillSource::ClassMean;
                    } else {
                        v = fallback_mean;
                        src = FillSource::GlobalMean;
                    }
                    res.output.set(r, c, static_cast<float>(v));
                    res.source.at(r, c) = static_cast<std::uint8_t>(src);
                }
            }
        });
    }
    return res;
}

/// Global averaging branch: pixels needing fill take their class mean.
inline SpatialResult global_average(const Scene& scene, const LandCoverGrid& land) {
    check_aligned_named({"lst", "mask", "land"}, scene.lst, scene.mask, land);
    const double fallback_mean = detail::global_clear_mean(scene);
    const ClassMeans means = class_means(scene, land);

    const GridShape shape = scene.lst.shape;
    SpatialResult res{scene.lst, Grid<std::uint8_t>(shape, scene.lst.georef,
                                                    std::uint8_t(FillSource::Observed))};
    for (std::size_t r = 0; r < shape.height; ++r) {
        for (std::size_t c = 0; c < shape.width; ++c) {
            if (!scene.needs_fill(r, c)) continue;
            const std::uint16_t cls = land.at(r, c);
            if (means.has(cls)) {
                res.output.set(r, c, static_cast<float>(means.mean.at(cls)));
                res.source.at(r, c) = static_cast<std::uint8_t>(FillSource::ClassMean);
            } else {
                res.output.set(r, c, static_cast<float>(fallback_mean));
                res.source.at(r, c) = static_cast<std::uint8_t>(FillSource::GlobalMean);
            }
        }
    }
    return res;
}

/// Spatial channel: local filtering below theta_star, class-mean
/// global averaging at or above it.
inline SpatialResult spatial_channel(const Scene& scene, const LandCoverGrid& land,
                                     const SpatialParams& params) {
    params.validate();
    if (scene.theta < params.theta_star) return local_filter(scene, land, params);
    return global_average(scene, land);
}

}  // namespace island

#endif  // ISLAND_SPATIAL_HPP
