// Copyright 2026 The Glint Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "glint/geometry.hpp"

namespace glint {

struct RunSummary {
    double mean = 0;
    double stddev = 0;  // sample standard deviation (n - 1)
};

// Throws glint::Error when fewer than two samples are given.
RunSummary summarize_runs(std::span<const double> samples_ms);

enum class BenchPhase { bvh_build, trace };
const char *phase_name(BenchPhase phase);

struct BenchmarkRow {
    std::size_t triangle_count = 0;
    BenchPhase phase = BenchPhase::bvh_build;
    double mean_ms = 0;
    double stddev_ms = 0;
    int run_count = 0;
    std::string machine;
    std::string scene;
};

struct BenchmarkReport {
    std::string machine;
    int warmup = 0;
    int samples_per_pixel = 0;
    int width = 0, height = 0, max_depth = 0;
    std::vector<BenchmarkRow> rows;
};

// "1,068,735"
std::string format_thousands(std::uint64_t value);
// "327.57 ms ± 0.56 ms"
std::string format_ms_pm(double mean, double stddev);

// One table per phase, shaped like "Triangles | <machine>".
std::string format_report_table(const BenchmarkReport &report);
std::string report_to_json(const BenchmarkReport &report);
BenchmarkReport report_from_json(const std::string &text);

// Bumpy closed sphere of roughly `target_triangles` triangles, unit radius.
// Different targets are tessellations of the same surface.
struct IndexedMesh {
    std::vector<Vec3> positions;
    std::vector<std::uint32_t> indices;
    std::size_t triangle_count() const { return indices.size() / 3; }
};

IndexedMesh make_bench_mesh(std::size_t target_triangles);

// Binary glTF with one mesh, one node, one named material; positions and
// indices only.
void write_glb(const IndexedMesh &mesh, const std::string &material_name,
               const std::filesystem::path &path);

}  // namespace glint
