// Copyright 2026 The Glint Authors
// SPDX-License-Identifier: Apache-2.0

#include "glint/bench.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "glint/error.hpp"

namespace glint {

RunSummary summarize_runs(std::span<const double> samples) {
    if (samples.size() < 2) throw Error("at least 2 runs required for stddev");
    const auto n = static_cast<double>(samples.size());
    // Welford's update: one pass, stable for long runs of similar values.
    double mean = 0, m2 = 0;
    std::size_t k = 0;
    for (double x : samples) {
        ++k;
        const double delta = x - mean;
        mean += delta / static_cast<double>(k);
        m2 += delta * (x - mean);
    }
    return {mean, std::sqrt(m2 / (n - 1))};
}

const char *phase_name(BenchPhase phase) {
    return phase == BenchPhase::bvh_build ? "bvh_build" : "trace";
}

std::string format_thousands(std::uint64_t value) {
    std::string digits = std::to_string(value);
    std::string out;
    const int n = static_cast<int>(digits.size());
    for (int i = 0; i < n; ++i) {
        if (i > 0 && (n - i) % 3 == 0) out.push_back(',');
        out.push_back(digits[i]);
    }
    return out;
}

namespace {

std::string format_fixed2(double v) {
    const double rounded = std::round(v * 100);
    const auto cents = static_cast<std::uint64_t>(std::abs(rounded));
    std::ostringstream os;
    if (rounded < 0) os << '-';
    os << format_thousands(cents / 100) << '.' << std::setw(2) << std::setfill('0') << cents % 100;
    return os.str();
}

}  // namespace

std::string format_ms_pm(double mean, double stddev) {
    return format_fixed2(mean) + " ms ± " + format_fixed2(stddev) + " ms";
}

std::string format_report_table(const BenchmarkReport &report) {
    std::ostringstream os;
    const std::string machine = report.machine.empty() ? "this machine" : report.machine;
    for (BenchPhase phase : {BenchPhase::bvh_build, BenchPhase::trace}) {
        os << (phase == BenchPhase::bvh_build ? "BVH setup time based on model complexity"
                                              : "Path tracer time based on model complexity")
           << '\n';
        os << std::setw(12) << "Triangles" << "   " << machine << '\n';
        for (const BenchmarkRow &row : report.rows) {
            if (row.phase != phase) continue;
            os << std::setw(12) << format_thousands(row.triangle_count) << "   "
               << format_ms_pm(row.mean_ms, row.stddev_ms) << '\n';
        }
        os << '\n';
    }
    os << "(mean of " << (report.rows.empty() ? 0 : report.rows.front().run_count)
       << " runs after " << report.warmup
       << " warmup runs; ± is the sample standard deviation)\n";
    return os.str();
}

std::string report_to_json(const BenchmarkReport &report) {
    nlohmann::json doc;
    doc["machine"] = report.machine;
    doc["warmup"] = report.warmup;
    doc["samples_per_pixel"] = report.samples_per_pixel;
    doc["width"] = report.width;
    doc["height"] = report.height;
    doc["max_depth"] = report.max_depth;
    doc["rows"] = nlohmann::json::array();
    for (const BenchmarkRow &row : report.rows) {
        doc["rows"].push_back({{"scene", row.scene},
                               {"triangle_count", row.triangle_count},
                               {"phase", phase_name(row.phase)},
                               {"mean_ms", row.mean_ms},
                               {"stddev_ms", row.stddev_ms},
                               {"run_count", row.run_count},
                               {"machine", row.machine}});
    }
    return doc.dump(2) + "\n";
}

BenchmarkReport report_from_json(const std::string &text) {
    try {
        const auto doc = nlohmann::json::parse(text);
        BenchmarkReport report;
        report.machine = doc.at("machine").get<std::string>();
        report.warmup = doc.at("warmup").get<int>();
        report.samples_per_pixel = doc.at("samples_per_pixel").get<int>();
        report.width = doc.at("width").get<int>();
        report.height = doc.at("height").get<int>();
        report.max_depth = doc.at("max_depth").get<int>();
        for (const auto &r : doc.at("rows")) {
            BenchmarkRow row;
            row.scene = r.at("scene").get<std::string>();
            row.triangle_count = r.at("triangle_count").get<std::size_t>();
            const std::string phase = r.at("phase").get<std::string>();
            if (phase != "trace" && phase != "bvh_build")
                throw Error("bench report: unknown phase '" + phase + "'");
            row.phase = phase == "trace" ? BenchPhase::trace : BenchPhase::bvh_build;
            row.mean_ms = r.at("mean_ms").get<double>();
            row.stddev_ms = r.at("stddev_ms").get<double>();
            row.run_count = r.at("run_count").get<int>();
            row.machine = r.at("machine").get<std::string>();
            report.rows.push_back(std::move(row));
        }
        return report;
    } catch (const nlohmann::json::exception &e) {
        throw Error(std::string("bench report: ") + e.what());
    }
}

IndexedMesh make_bench_mesh(std::size_t target) {
    // Lat-long grid with fan caps: 4 * rings * (rings - 1) triangles when
    // segments = 2 * rings.
    const auto rings = static_cast<std::uint32_t>(
        std::max(3.0, std::round(0.5 + std::sqrt(0.25 + static_cast<double>(target) / 4))));
    const std::uint32_t segments = 2 * rings;
    auto radius = [](real theta, real phi) {
        return 1 + 0.06 * std::sin(6 * theta) * std::cos(8 * phi) +
               0.03 * std::sin(17 * theta + 3 * phi);
    };
    auto point = [&](real theta, real phi) {
        const real r = radius(theta, phi);
        return Vec3{r * std::sin(theta) * std::cos(phi), r * std::cos(theta),
                    r * std::sin(theta) * std::sin(phi)};
    };

    IndexedMesh mesh;
    mesh.positions.push_back(point(0, 0));  // north pole
    for (std::uint32_t i = 1; i < rings; ++i) {
        const real theta = kPi * i / rings;
        for (std::uint32_t j = 0; j < segments; ++j)
            mesh.positions.push_back(point(theta, 2 * kPi * j / segments));
    }
    mesh.positions.push_back(point(kPi, 0));  // south pole
    const auto south = static_cast<std::uint32_t>(mesh.positions.size() - 1);
    auto ring_vertex = [&](std::uint32_t ring, std::uint32_t seg) {
        return 1 + (ring - 1) * segments + seg % segments;
    };
    auto tri = [&](std::uint32_t a, std::uint32_t b, std::uint32_t c) {
        mesh.indices.insert(mesh.indices.end(), {a, b, c});
    };
    for (std::uint32_t j = 0; j < segments; ++j) tri(0, ring_vertex(1, j + 1), ring_vertex(1, j));
    for (std::uint32_t i = 1; i + 1 < rings; ++i) {
        for (std::uint32_t j = 0; j < segments; ++j) {
            const std::uint32_t a = ring_vertex(i, j), b = ring_vertex(i, j + 1);
            const std::uint32_t c = ring_vertex(i + 1, j), d = ring_vertex(i + 1, j + 1);
            tri(a, b, d);
            tri(a, d, c);
        }
    }
    for (std::uint32_t j = 0; j < segments; ++j)
        tri(south, ring_vertex(rings - 1, j), ring_vertex(rings - 1, j + 1));
    return mesh;
}

void write_glb(const IndexedMesh &mesh, const std::string &material_name,
               const std::filesystem::path &path) {
    std::vector<std::uint8_t> bin;
    auto append = [&](const void *data, std::size_t n) {
        const auto *p = static_cast<const std::uint8_t *>(data);
        bin.insert(bin.end(), p, p + n);
        while (bin.size() % 4 != 0) bin.push_back(0);
    };
    std::vector<float> pos;
    pos.reserve(mesh.positions.size() * 3);
    Vec3 lo{kInfinity}, hi{-kInfinity};
    for (const Vec3 &p : mesh.positions) {
        const Vec3 q{static_cast<float>(p.x), static_cast<float>(p.y), static_cast<float>(p.z)};
        pos.insert(pos.end(), {static_cast<float>(q.x), static_cast<float>(q.y),
                               static_cast<float>(q.z)});
        lo = min(lo, q);
        hi = max(hi, q);
    }
    append(pos.data(), pos.size() * sizeof(float));
    const std::size_t index_offset = bin.size();
    append(mesh.indices.data(), mesh.indices.size() * sizeof(std::uint32_t));

    nlohmann::json doc = {
        {"asset", {{"version", "2.0"}, {"generator", "glint"}}},
        {"scene", 0},
        {"scenes", {{{"nodes", {0}}}}},
        {"nodes", {{{"mesh", 0}, {"name", "bench"}}}},
        {"materials", {{{"name", material_name}}}},
        {"meshes",
         {{{"name", "bench"},
           {"primitives",
            {{{"attributes", {{"POSITION", 0}}}, {"indices", 1}, {"material", 0}, {"mode", 4}}}}}}},
        {"buffers", {{{"byteLength", bin.size()}}}},
        {"bufferViews",
         {{{"buffer", 0}, {"byteOffset", 0}, {"byteLength", pos.size() * sizeof(float)}},
          {{"buffer", 0},
           {"byteOffset", index_offset},
           {"byteLength", mesh.indices.size() * sizeof(std::uint32_t)}}}},
        {"accessors",
         {{{"bufferView", 0},
           {"componentType", 5126},
           {"count", mesh.positions.size()},
           {"type", "VEC3"},
           {"min", {lo.x, lo.y, lo.z}},
           {"max", {hi.x, hi.y, hi.z}}},
          {{"bufferView", 1},
           {"componentType", 5125},
           {"count", mesh.indices.size()},
           {"type", "SCALAR"}}}}};
    std::string text = doc.dump();
    while (text.size() % 4 != 0) text.push_back(' ');

    std::vector<std::uint8_t> out;
    auto u32 = [&](std::uint32_t v) {
        for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    };
    const auto total = static_cast<std::uint32_t>(12 + 8 + text.size() + 8 + bin.size());
    u32(0x46546C67);
    u32(2);
    u32(total);
    u32(static_cast<std::uint32_t>(text.size()));
    u32(0x4E4F534A);
    out.insert(out.end(), text.begin(), text.end());
    u32(static_cast<std::uint32_t>(bin.size()));
    u32(0x004E4942);
    out.insert(out.end(), bin.begin(), bin.end());

    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write GLB '" + path.string() + "'");
    f.write(reinterpret_cast<const char *>(out.data()), static_cast<std::streamsize>(out.size()));
    if (!f) throw Error("cannot write GLB '" + path.string() + "'");
}

}  // namespace glint
