// Copyright 2026 The Glint Authors
// SPDX-License-Identifier: Apache-2.0

#include "glint/cli.hpp"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "glint/bench.hpp"
#include "glint/error.hpp"
#include "glint/image.hpp"
#include "glint/integrator.hpp"

namespace glint::cli {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// CLI11 wants argv-style input; index 0 is the program name.
int parse(CLI::App &app, const std::vector<std::string> &args, std::ostream &out,
          std::ostream &err) {
    std::vector<const char *> argv{app.get_name().c_str()};
    for (const auto &a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }
    return -1;
}

struct LoadedScene {
    SceneDescription scene;
    double ingest_ms = 0;
};

LoadedScene load_scene(const std::string &scene_path, const std::optional<RenderConfig> &config,
                       int width, int height) {
    const auto start = Clock::now();
    const GltfDocument doc = load_gltf(scene_path);
    const RenderConfig cfg = config.value_or(RenderConfig{});
    CameraConfig camera;
    bool framed = !cfg.camera.has_value();
    if (!framed) camera = *cfg.camera;
    camera.width = width;
    camera.height = height;
    LoadedScene loaded;
    loaded.scene = flatten_scene(doc, cfg.materials, camera, cfg.environment);
    if (framed) {
        loaded.scene.camera = frame_bounds(loaded.scene.bounds(), width, height);
    }
    loaded.ingest_ms = ms_since(start);
    return loaded;
}

}  // namespace

int cmd_render(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Render a glTF scene to PNG", "glint render"};
    std::string scene_path, config_path, out_path, dump_path;
    std::optional<int> width, height;
    RenderSettings settings;
    bool progress = false;
    app.add_option("--scene", scene_path, "glTF 2.0 scene (.gltf or .glb)")->required();
    app.add_option("--config", config_path, "render config (camera, environment, materials)");
    app.add_option("--out", out_path, "output PNG path")->required();
    app.add_option("--spp", settings.samples_per_pixel, "samples per pixel")
        ->default_val(100)
        ->check(CLI::PositiveNumber);
    app.add_option("--width", width, "image width (default: config, else 512)")
        ->check(CLI::PositiveNumber);
    app.add_option("--height", height, "image height (default: config, else 512)")
        ->check(CLI::PositiveNumber);
    app.add_option("--max-depth", settings.max_depth, "maximum surface bounces")
        ->default_val(5)
        ->check(CLI::PositiveNumber);
    app.add_option("--rr-start", settings.rr_start_depth, "bounce at which roulette starts")
        ->default_val(3)
        ->check(CLI::PositiveNumber);
    app.add_option("--seed", settings.global_seed, "global seed")->default_val(0);
    app.add_option("--threads", settings.threads, "worker threads (0: all cores)")->default_val(0);
    app.add_option("--dump-linear", dump_path, "also write raw linear float32 RGB");
    app.add_flag("--progress", progress, "report each completed sample on stderr");
    if (int code = parse(app, args, out, err); code >= 0) return code;

    try {
        std::optional<RenderConfig> config;
        if (!config_path.empty()) config = load_render_config(config_path);
        const int w = width.value_or(config && config->camera ? config->camera->width : 512);
        const int h = height.value_or(config && config->camera ? config->camera->height : 512);
        settings.width = w;
        settings.height = h;
        if (settings.rr_start_depth > settings.max_depth) settings.rr_start_depth = settings.max_depth;
        const auto problems = settings.validate();
        if (!problems.empty()) {
            err << "error: " << problems.front() << "\n";
            return kExitUsage;
        }

        const LoadedScene loaded = load_scene(scene_path, config, w, h);
        const SceneDescription &scene = loaded.scene;

        const auto build_start = Clock::now();
        const Bvh bvh = build_bvh(scene.triangles);
        const double build_ms = ms_since(build_start);

        const auto trace_start = Clock::now();
        const Accumulator acc = render_progressive(scene, bvh, settings, [&](int s, double ms) {
            if (progress) err << "sample " << (s + 1) << "/" << settings.samples_per_pixel << " "
                              << std::fixed << std::setprecision(1) << ms << " ms\n";
        });
        const double trace_ms = ms_since(trace_start);
        const double per_sample = trace_ms / settings.samples_per_pixel;

        write_png(display_encode(acc), out_path);
        if (!dump_path.empty()) write_linear_dump(acc, dump_path);

        out << std::fixed << std::setprecision(2);
        out << "ingest: " << loaded.ingest_ms << " ms (" << scene.triangles.size()
            << " triangles, " << scene.dropped_degenerate << " degenerate dropped)\n";
        out << "bvh build: " << build_ms << " ms (" << bvh.stats.node_count << " nodes, "
            << bvh.stats.leaf_count << " leaves, depth " << bvh.stats.max_depth << ")\n";
        out << "trace: " << trace_ms << " ms total, " << per_sample << " ms/sample ("
            << settings.samples_per_pixel << " samples, " << w << "x" << h << ", "
            << resolve_thread_count(settings.threads) << " threads)\n";
        if (acc.discarded > 0) out << "discarded samples: " << acc.discarded << "\n";
        out << "wrote " << out_path << "\n";
        out << std::setprecision(3);
        out << "metric ingest_ms=" << loaded.ingest_ms << "\n";
        out << "metric bvh_build_ms=" << build_ms << "\n";
        out << "metric trace_total_ms=" << trace_ms << "\n";
        out << "metric trace_per_sample_ms=" << per_sample << "\n";
        out << "metric triangles=" << scene.triangles.size() << "\n";
        out << "metric discarded_samples=" << acc.discarded << "\n";
        return kExitOk;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}

int cmd_bench(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Time BVH construction and path tracing per scene", "glint bench"};
    std::vector<std::string> scenes;
    std::string report_path, table_path, config_path;
    std::string machine;
    int runs = 30, warmup = 2;
    RenderSettings settings;
    app.add_option("--scenes", scenes, "glTF scenes to measure")->required()->expected(1, -1);
    app.add_option("--runs", runs, "timed runs per phase")->default_val(30);
    app.add_option("--warmup", warmup, "discarded runs before timing")->default_val(2)
        ->check(CLI::NonNegativeNumber);
    app.add_option("--spp", settings.samples_per_pixel, "samples per pixel per trace run")
        ->default_val(100)
        ->check(CLI::PositiveNumber);
    app.add_option("--width", settings.width, "image width")->default_val(512)
        ->check(CLI::PositiveNumber);
    app.add_option("--height", settings.height, "image height")->default_val(512)
        ->check(CLI::PositiveNumber);
    app.add_option("--max-depth", settings.max_depth, "maximum surface bounces")
        ->default_val(5)
        ->check(CLI::PositiveNumber);
    app.add_option("--seed", settings.global_seed, "global seed")->default_val(0);
    app.add_option("--threads", settings.threads, "worker threads (0: all cores)")->default_val(0);
    app.add_option("--config", config_path, "render config applied to every scene");
    app.add_option("--machine", machine, "machine label for the report");
    app.add_option("--out", report_path, "machine-readable report (JSON)")->required();
    app.add_option("--table", table_path, "also write the text table to this file");
    if (int code = parse(app, args, out, err); code >= 0) return code;

    if (runs < 2) {
        err << "error: at least 2 runs required for stddev\n";
        return kExitUsage;
    }
    if (settings.rr_start_depth > settings.max_depth) settings.rr_start_depth = settings.max_depth;

    try {
        std::optional<RenderConfig> config;
        if (!config_path.empty()) config = load_render_config(config_path);
        BenchmarkReport report;
        report.machine = machine.empty() ? "this machine" : machine;
        report.warmup = warmup;
        report.samples_per_pixel = settings.samples_per_pixel;
        report.width = settings.width;
        report.height = settings.height;
        report.max_depth = settings.max_depth;

        std::vector<BenchmarkRow> build_rows, trace_rows;
        for (const std::string &path : scenes) {
            // Parsing and flattening are outside both timed phases.
            const LoadedScene loaded = load_scene(path, config, settings.width, settings.height);
            const SceneDescription &scene = loaded.scene;
            err << "scene " << path << ": " << scene.triangles.size() << " triangles\n";

            std::vector<double> build_ms;
            std::optional<Bvh> bvh;
            for (int i = 0; i < warmup + runs; ++i) {
                const auto start = Clock::now();
                Bvh built = build_bvh(scene.triangles);
                const double ms = ms_since(start);
                if (i >= warmup) build_ms.push_back(ms);
                bvh = std::move(built);
            }
            std::vector<double> trace_ms;
            for (int i = 0; i < warmup + runs; ++i) {
                const auto start = Clock::now();
                const Accumulator acc = render_progressive(scene, *bvh, settings);
                const double ms = ms_since(start);
                if (i >= warmup) trace_ms.push_back(ms);
                err << "  trace run " << (i + 1) << "/" << (warmup + runs) << ": " << ms << " ms\n";
            }
            const RunSummary b = summarize_runs(build_ms);
            const RunSummary t = summarize_runs(trace_ms);
            build_rows.push_back({scene.triangles.size(), BenchPhase::bvh_build, b.mean, b.stddev,
                                  runs, report.machine, path});
            trace_rows.push_back({scene.triangles.size(), BenchPhase::trace, t.mean, t.stddev,
                                  runs, report.machine, path});
        }
        report.rows = build_rows;
        report.rows.insert(report.rows.end(), trace_rows.begin(), trace_rows.end());

        const std::string table = format_report_table(report);
        out << table;
        std::ofstream json_out(report_path);
        if (!json_out) throw Error("cannot write report '" + report_path + "'");
        json_out << report_to_json(report);
        if (!table_path.empty()) {
            std::ofstream table_out(table_path);
            if (!table_out) throw Error("cannot write table '" + table_path + "'");
            table_out << table;
        }
        return kExitOk;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}

int cmd_generate(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Write the procedural benchmark model at several tessellation levels",
                 "glint generate"};
    std::string out_dir;
    std::vector<std::size_t> levels{10'000, 100'000, 1'000'000};
    app.add_option("--out-dir", out_dir, "output directory")->required();
    app.add_option("--levels", levels, "target triangle counts")->delimiter(',');
    if (int code = parse(app, args, out, err); code >= 0) return code;
    try {
        std::filesystem::create_directories(out_dir);
        for (std::size_t target : levels) {
            const IndexedMesh mesh = make_bench_mesh(target);
            const auto path = std::filesystem::path(out_dir) /
                              ("bench_" + std::to_string(target) + ".glb");
            write_glb(mesh, "bench_surface", path);
            out << path.string() << ": " << mesh.triangle_count() << " triangles\n";
        }
        return kExitOk;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    const char *usage =
        "usage: glint <command> [options]\n"
        "commands:\n"
        "  render    render a glTF scene to PNG\n"
        "  bench     time BVH build and tracing over a list of scenes\n"
        "  generate  write the procedural benchmark scenes\n"
        "run 'glint <command> --help' for options\n";
    if (args.empty()) {
        err << usage;
        return kExitUsage;
    }
    const std::string &command = args.front();
    const std::vector<std::string> rest(args.begin() + 1, args.end());
    if (command == "render") return cmd_render(rest, out, err);
    if (command == "bench") return cmd_bench(rest, out, err);
    if (command == "generate") return cmd_generate(rest, out, err);
    if (command == "--help" || command == "-h") {
        out << usage;
        return kExitOk;
    }
    err << "error: unknown command '" << command << "'\n" << usage;
    return kExitUsage;
}

}  // namespace glint::cli
