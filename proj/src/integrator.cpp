// Copyright 2026 The Glint Authors
// SPDX-License-Identifier: Apache-2.0

#include "glint/integrator.hpp"

#include <atomic>
#include <chrono>
#include <iostream>
#include <thread>

#include "glint/material.hpp"

namespace glint {

std::vector<std::string> RenderSettings::validate() const {
    std::vector<std::string> errors;
    if (width < 1 || height < 1) errors.emplace_back("width and height must be >= 1");
    if (samples_per_pixel < 1) errors.emplace_back("samples_per_pixel must be >= 1");
    if (max_depth < 1) errors.emplace_back("max_depth must be >= 1");
    if (rr_start_depth < 1) errors.emplace_back("rr_start_depth must be >= 1");
    if (russian_roulette && rr_start_depth > max_depth)
        errors.emplace_back("rr_start_depth must not exceed max_depth");
    return errors;
}

Accumulator::Accumulator(int w, int h)
    : width(w), height(h), mean(static_cast<std::size_t>(w) * h),
      pixel_samples(static_cast<std::size_t>(w) * h, 0) {}

void Accumulator::add(std::size_t pixel, const Vec3 &radiance) {
    if (!is_finite(radiance) || min_component(radiance) < 0) {
        ++discarded;
        return;
    }
    const std::uint32_t k = ++pixel_samples[pixel];
    mean[pixel] += (radiance - mean[pixel]) / static_cast<real>(k);
}

Ray generate_camera_ray(const CameraConfig &camera, int px, int py, real jitter_x,
                        real jitter_y) {
    const Vec3 forward = normalize(camera.look_at - camera.position);
    const Vec3 right = normalize(cross(forward, camera.up));
    const Vec3 up = cross(right, forward);
    const real tan_half = std::tan(camera.vertical_fov * kPi / 360);
    const real aspect = static_cast<real>(camera.width) / camera.height;

    const real u = (px + jitter_x) / camera.width;
    const real v = (py + jitter_y) / camera.height;
    const real x = (2 * u - 1) * tan_half * aspect;
    const real y = (1 - 2 * v) * tan_half;
    Ray ray;
    ray.origin = camera.position;
    ray.direction = normalize(forward + x * right + y * up);
    return ray;
}

namespace {

// Offset along the geometric normal, scaled with the magnitude of the point.
Vec3 offset_origin(const Vec3 &p, const Vec3 &ng) {
    const real scale = 1 + max_component(Vec3{std::abs(p.x), std::abs(p.y), std::abs(p.z)});
    return p + ng * (1e-7 * scale);
}

}  // namespace

Vec3 trace_radiance(const SceneDescription &scene, const Bvh &bvh, const Ray &camera_ray,
                    PcgStream &rng, const RenderSettings &settings,
                    PathDiagnostics *diagnostics) {
    Vec3 radiance{0};
    Vec3 throughput{1};
    Ray ray = camera_ray;
    for (int bounce = 0;; ++bounce) {
        if (diagnostics) diagnostics->bounces = bounce;
        const auto hit = intersect_scene(bvh, scene.triangles, ray);
        if (!hit) {
            radiance += throughput * scene.environment.lookup(ray.direction);
            break;
        }
        const OpenPbrParams &material =
            scene.materials[scene.triangles[hit->triangle_index].material_index];
        radiance += throughput * emitted_radiance(material);
        if (bounce == settings.max_depth) break;

        const Vec3 wo = -ray.direction;
        Vec3 n = hit->shading_normal;
        if (dot(n, wo) <= 0) n = hit->geometric_normal;
        const real u0 = rng.next_real();
        const real u1 = rng.next_real();
        const real u2 = rng.next_real();
        const BsdfSample s = sample_bsdf(wo, n, material, u0, u1, u2);
        if (s.pdf <= 0 || dot(s.direction, hit->geometric_normal) <= 0) break;
        throughput *= s.throughput_weight;
        if (max_component(throughput) <= 0) break;

        if (settings.russian_roulette && bounce + 1 >= settings.rr_start_depth) {
            const real survive = std::clamp(max_component(throughput), real(0.05), real(1));
            if (rng.next_real() >= survive) {
                if (diagnostics) diagnostics->terminated_by_roulette = true;
                break;
            }
            throughput /= survive;
        }
        ray.origin = offset_origin(ray.at(hit->t), hit->geometric_normal);
        ray.direction = s.direction;
        ray.t_min = 0;
        ray.t_max = kInfinity;
    }
    return radiance;
}

Vec3 render_pixel_sample(const SceneDescription &scene, const Bvh &bvh,
                         const CameraConfig &camera, int px, int py, int sample,
                         const RenderSettings &settings) {
    const auto pixel = static_cast<std::uint64_t>(py) * camera.width + px;
    PcgStream rng(seed_stream(pixel, static_cast<std::uint64_t>(sample), settings.global_seed));
    const real jx = rng.next_real();
    const real jy = rng.next_real();
    return trace_radiance(scene, bvh, generate_camera_ray(camera, px, py, jx, jy), rng,
                          settings);
}

unsigned resolve_thread_count(unsigned requested) {
    if (requested > 0) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t, std::size_t)> &body) {
    threads = resolve_thread_count(threads);
    if (threads == 1 || count <= 1) {
        body(0, count);
        return;
    }
    constexpr std::size_t kChunk = 16;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t begin = next.fetch_add(kChunk);
            if (begin >= count) return;
            body(begin, std::min(count, begin + kChunk));
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(threads - 1);
    for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
}

Accumulator render_progressive(const SceneDescription &scene, const Bvh &bvh,
                               const RenderSettings &settings, const ProgressSink &progress) {
    CameraConfig camera = scene.camera;
    camera.width = settings.width;
    camera.height = settings.height;
    Accumulator acc(settings.width, settings.height);
    const auto started = std::chrono::steady_clock::now();
    const unsigned threads = resolve_thread_count(settings.threads);

    // Each row is written only by the worker that claimed it in this pass.
    std::vector<std::uint64_t> row_discards(static_cast<std::size_t>(settings.height));
    for (int s = 0; s < settings.samples_per_pixel; ++s) {
        parallel_for(static_cast<std::size_t>(settings.height), threads,
                     [&](std::size_t row_begin, std::size_t row_end) {
                         for (std::size_t row = row_begin; row < row_end; ++row) {
                             const int py = static_cast<int>(row);
                             for (int px = 0; px < settings.width; ++px) {
                                 const std::size_t pixel = row * settings.width + px;
                                 const Vec3 L =
                                     render_pixel_sample(scene, bvh, camera, px, py, s, settings);
                                 if (!is_finite(L) || min_component(L) < 0) {
                                     ++row_discards[row];
                                     continue;
                                 }
                                 const std::uint32_t k = ++acc.pixel_samples[pixel];
                                 acc.mean[pixel] += (L - acc.mean[pixel]) / static_cast<real>(k);
                             }
                         }
                     });
        acc.sample_count = s + 1;
        if (progress) {
            progress(s, std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - started)
                            .count());
        }
    }
    for (std::uint64_t d : row_discards) acc.discarded += d;
    const double total = static_cast<double>(settings.width) * settings.height *
                         settings.samples_per_pixel;
    if (acc.discarded > 0 && acc.discarded > 1e-4 * total) {
        std::cerr << "warning: discarded " << acc.discarded
                  << " non-finite path samples (more than 0.01%)\n";
    }
    return acc;
}

}  // namespace glint
