// Copyright 2026 The Glint Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "glint/bvh.hpp"
#include "glint/rng.hpp"
#include "glint/scene.hpp"

namespace glint {

struct RenderSettings {
    int width = 512;
    int height = 512;
    int samples_per_pixel = 100;
    int max_depth = 5;       // surface bounces
    int rr_start_depth = 3;  // first bounce count at which roulette applies
    bool russian_roulette = true;
    std::uint64_t global_seed = 0;
    unsigned threads = 0;  // 0: hardware concurrency

    std::vector<std::string> validate() const;
};

// Running per-pixel mean of linear radiance.
struct Accumulator {
    int width = 0, height = 0;
    std::vector<Vec3> mean;
    std::vector<std::uint32_t> pixel_samples;  // accepted samples per pixel
    int sample_count = 0;                      // completed passes
    std::uint64_t discarded = 0;               // non-finite path results

    Accumulator() = default;
    Accumulator(int w, int h);

    // Incremental mean; non-finite or negative values are discarded.
    void add(std::size_t pixel, const Vec3 &radiance);
    const Vec3 &at(int x, int y) const { return mean[static_cast<std::size_t>(y) * width + x]; }
};

// Pinhole camera, y-down image coordinates, jitter in [0, 1)^2.
Ray generate_camera_ray(const CameraConfig &camera, int px, int py, real jitter_x,
                        real jitter_y);

struct PathDiagnostics {
    int bounces = 0;
    bool terminated_by_roulette = false;
};

// One path sample of the radiance arriving along `ray`.
Vec3 trace_radiance(const SceneDescription &scene, const Bvh &bvh, const Ray &ray,
                    PcgStream &rng, const RenderSettings &settings,
                    PathDiagnostics *diagnostics = nullptr);

// Full estimate for one (pixel, sample): seeds the stream, jitters the camera
// ray, traces it.
Vec3 render_pixel_sample(const SceneDescription &scene, const Bvh &bvh,
                         const CameraConfig &camera, int px, int py, int sample,
                         const RenderSettings &settings);

// Called once per completed pass with (sample index, elapsed ms since start).
using ProgressSink = std::function<void(int, double)>;

Accumulator render_progressive(const SceneDescription &scene, const Bvh &bvh,
                               const RenderSettings &settings,
                               const ProgressSink &progress = {});

// Runs body(begin, end) over [0, count) in contiguous chunks on `threads`
// workers. Chunk assignment never affects results written per index.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t, std::size_t)> &body);

unsigned resolve_thread_count(unsigned requested);

}  // namespace glint
