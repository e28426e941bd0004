// Copyright 2026 The Glint Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <fstream>

#include "glint/error.hpp"
#include "glint/scene.hpp"
#include "support/oracles.hpp"

using namespace glint;
using glint::test::fixture;

namespace {

SceneDescription flatten(const GltfDocument &doc, const MaterialMap &map = {}) {
    return flatten_scene(doc, map, CameraConfig{}, EnvironmentConfig{});
}

real angle_deg(const Vec3 &a, const Vec3 &b) {
    return std::acos(std::clamp(dot(normalize(a), normalize(b)), real(-1), real(1))) * 180 / kPi;
}

std::string error_of(const std::function<void()> &fn) {
    try {
        fn();
    } catch (const Error &e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("single triangle with an embedded buffer") {
    const GltfDocument doc = load_gltf(fixture("triangle.gltf"));
    REQUIRE(doc.meshes.size() == 1);
    REQUIRE(doc.meshes[0].primitives.size() == 1);
    const GltfPrimitive &prim = doc.meshes[0].primitives[0];
    CHECK(prim.positions.size() == 3);
    CHECK(prim.indices == std::vector<std::uint32_t>{0, 1, 2});
    CHECK_FALSE(prim.normals_generated);
    REQUIRE(doc.materials.size() == 1);
    CHECK(doc.materials[0].name == "steel_polished");
    CHECK(glint::test::near(*doc.materials[0].base_color, {0.9, 0.6, 0.3}));

    const SceneDescription scene = flatten(doc);
    REQUIRE(scene.triangles.size() == 1);
    CHECK(scene.triangles[0].v0 == Vec3{-1, -1, 0});
    CHECK(scene.triangles[0].v2 == Vec3{0, 1, 0});
    CHECK(scene.dropped_degenerate == 0);
}

TEST_CASE("node scale is baked into world-space vertices") {
    const SceneDescription local = flatten(load_gltf(fixture("triangle.gltf")));
    const SceneDescription scaled = flatten(load_gltf(fixture("scaled.gltf")));
    REQUIRE(scaled.triangles.size() == 1);
    CHECK(scaled.triangles[0].v0 == 2 * local.triangles[0].v0);
    CHECK(scaled.triangles[0].v1 == 2 * local.triangles[0].v1);
    CHECK(scaled.triangles[0].v2 == 2 * local.triangles[0].v2);
    CHECK(scaled.triangles[0].n0 == local.triangles[0].n0);
}

TEST_CASE("generated icosphere normals follow the analytic sphere") {
    const GltfDocument doc = load_gltf(fixture("icosphere.gltf"));
    const GltfPrimitive &prim = doc.meshes.at(0).primitives.at(0);
    CHECK(prim.normals_generated);
    REQUIRE(prim.normals.size() == prim.positions.size());
    real worst = 0;
    for (std::size_t i = 0; i < prim.positions.size(); ++i)
        worst = std::max(worst, angle_deg(prim.normals[i], prim.positions[i]));
    MESSAGE("worst generated-normal deviation " << worst << " deg");
    CHECK(worst <= 15);
    CHECK(flatten(doc).dropped_degenerate == 0);
}

TEST_CASE("two nodes referencing one mesh double the triangles") {
    const SceneDescription one = flatten(load_gltf(fixture("triangle.gltf")));
    const SceneDescription two = flatten(load_gltf(fixture("instanced.gltf")));
    CHECK(two.triangles.size() == 2 * one.triangles.size());
    CHECK(two.triangles[1].v0 == one.triangles[0].v0 + Vec3{3, 0, 0});
}

TEST_CASE("material map resolution") {
    MaterialMap map;
    map.default_params.base_color = Vec3{0.5};
    MaterialMapEntry steel;
    steel.pattern = "steel_polished";
    steel.overrides.base_metalness = 1;
    steel.overrides.specular_roughness = 0.1;
    MaterialMapEntry paint;
    paint.pattern = "paint_*";
    paint.overrides.base_color = Vec3{0, 0, 1};
    map.entries = {paint, steel};

    const SceneDescription scene = flatten(load_gltf(fixture("triangle.gltf")), map);
    const OpenPbrParams &p = scene.materials.at(scene.triangles[0].material_index);
    CHECK(p.base_metalness == 1);
    CHECK(p.specular_roughness == 0.1);
    CHECK(p.base_color == Vec3{0.5});  // map default, not the glTF factor

    CHECK(steel.matches("steel_polished"));
    CHECK_FALSE(steel.matches("steel_polished_2"));
    CHECK(paint.matches("paint_red"));
    CHECK(paint.matches("paint_"));
    CHECK_FALSE(paint.matches("pain"));
    CHECK(map.find("paint_red") == &map.entries[0]);
    CHECK(map.find("wood") == nullptr);

    // No entry: glTF factors override the map default.
    const SceneDescription plain = flatten(load_gltf(fixture("triangle.gltf")));
    const OpenPbrParams &q = plain.materials.at(plain.triangles[0].material_index);
    CHECK(glint::test::near(q.base_color, {0.9, 0.6, 0.3}));
    CHECK(q.specular_roughness == doctest::Approx(0.8));
    CHECK(q.base_metalness == 0);
}

TEST_CASE("non-uniform scale bakes normals with the inverse transpose") {
    const GltfDocument doc = load_gltf(fixture("stretched.glb"));
    const SceneDescription scene = flatten(doc);
    REQUIRE(scene.triangles.size() == 320);
    // Ellipsoid ((x - 0.5), y / 2, z) on the unit sphere: gradient is the
    // analytic normal and is perpendicular to the transformed tangent plane.
    real worst = 0;
    for (const Triangle &t : scene.triangles) {
        const Vec3 v[3] = {t.v0, t.v1, t.v2};
        const Vec3 n[3] = {t.n0, t.n1, t.n2};
        for (int k = 0; k < 3; ++k) {
            const Vec3 q{v[k].x - 0.5, v[k].y, v[k].z};
            const Vec3 analytic = normalize(Vec3{q.x, q.y / 4, q.z});
            // Tangent plane of the unit sphere at p maps to M * tangent.
            const Vec3 p{q.x, q.y / 2, q.z};
            const Vec3 helper = std::abs(p.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
            const Vec3 ta = normalize(cross(p, helper)), tb = cross(p, ta);
            const Vec3 wa{ta.x, 2 * ta.y, ta.z}, wb{tb.x, 2 * tb.y, tb.z};
            worst = std::max({worst, std::abs(dot(n[k], normalize(wa))),
                              std::abs(dot(n[k], normalize(wb)))});
            CHECK(dot(n[k], analytic) == doctest::Approx(1).epsilon(1e-3));
            CHECK(std::abs(length(n[k]) - 1) <= 1e-9);
        }
    }
    CHECK(worst <= 1e-3);
}

TEST_CASE("baked bounds match a direct per-vertex transform") {
    const GltfDocument doc = load_gltf(fixture("stretched.glb"));
    const SceneDescription scene = flatten(doc);
    const auto &positions = doc.meshes[0].primitives[0].positions;
    Vec3 lo{kInfinity}, hi{-kInfinity};
    for (const Vec3 &p : positions) {
        const Vec3 w{p.x + 0.5, 2 * p.y, p.z};
        lo = min(lo, w);
        hi = max(hi, w);
    }
    const Aabb b = scene.bounds();
    for (int c = 0; c < 3; ++c) {
        CHECK(std::abs(b.min[c] - lo[c]) <= 1e-6);
        CHECK(std::abs(b.max[c] - hi[c]) <= 1e-6);
    }
}

TEST_CASE("ingestion is deterministic and drops nothing on well-formed fixtures") {
    for (const char *name : {"triangle.gltf", "scaled.gltf", "instanced.gltf", "icosphere.gltf",
                             "stretched.glb", "furnace_sphere.glb"}) {
        CAPTURE(name);
        const SceneDescription a = flatten(load_gltf(fixture(name)));
        const SceneDescription b = flatten(load_gltf(fixture(name)));
        CHECK(a == b);
        CHECK(a.dropped_degenerate == 0);
        for (const Triangle &t : a.triangles) CHECK(t.material_index < a.materials.size());
    }
}

TEST_CASE("degenerate triangles are dropped and counted") {
    GltfDocument doc;
    GltfMesh mesh;
    GltfPrimitive prim;
    prim.positions = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {2, 2, 2}, {3, 3, 3}, {4, 4, 4}};
    prim.normals = std::vector<Vec3>(6, Vec3{0, 0, 1});
    prim.indices = {0, 1, 2, 3, 4, 5, 0, 0, 1};
    mesh.primitives.push_back(prim);
    doc.meshes.push_back(mesh);
    GltfNode node;
    node.mesh = 0;
    doc.nodes.push_back(node);
    doc.root_nodes = {0};
    const SceneDescription scene = flatten(doc);
    CHECK(scene.triangles.size() == 1);
    CHECK(scene.dropped_degenerate == 2);

    doc.meshes[0].primitives[0].indices = {3, 4, 5};
    CHECK_THROWS_AS(flatten(doc), EmptySceneError);
}

TEST_CASE("load errors name the problem") {
    const std::string missing = error_of([] { load_gltf(fixture("no_such_file.gltf")); });
    CHECK(missing.find("no_such_file.gltf") != std::string::npos);

    const std::string malformed = error_of([] { load_gltf(fixture("malformed.gltf")); });
    CHECK(malformed.find("malformed") != std::string::npos);

    const std::string lines = error_of([] { load_gltf(fixture("lines.gltf")); });
    CHECK(lines.find("unsupported primitive mode 1") != std::string::npos);
    CHECK(lines.find("tri") != std::string::npos);

    const std::string bad_index = error_of([] {
        parse_gltf(R"({"asset":{"version":"2.0"},"meshes":[{"name":"m","primitives":[{"attributes":{"POSITION":4}}]}]})");
    });
    CHECK(bad_index.find("accessor") != std::string::npos);

    const std::string bad_glb = error_of([] {
        const auto path = std::filesystem::temp_directory_path() / "glint_bad.glb";
        std::ofstream(path, std::ios::binary) << "glTF\x02";
        load_gltf(path);
    });
    CHECK_FALSE(bad_glb.empty());
}

TEST_CASE("render config parsing") {
    const RenderConfig c = parse_render_config(R"({
        "camera": {"position": [0, 1, 5], "look_at": [0, 0, 0], "vertical_fov": 30,
                   "width": 320, "height": 200},
        "environment": {"type": "gradient", "zenith": [0.2, 0.4, 1], "horizon": [1, 1, 1]},
        "materials": {
            "default": {"base_color": [0.5, 0.5, 0.5]},
            "entries": [{"match": "steel_*", "params": {"base_metalness": 1}}]
        }
    })");
    REQUIRE(c.camera);
    CHECK(c.camera->position == Vec3{0, 1, 5});
    CHECK(c.camera->width == 320);
    CHECK(c.camera->vertical_fov == 30);
    CHECK(c.environment.kind == EnvironmentConfig::Kind::gradient);
    CHECK(glint::test::near(c.environment.lookup({0, 1, 0}), {0.2, 0.4, 1}));
    CHECK(c.environment.lookup({1, 0, 0}) == Vec3{1, 1, 1});
    CHECK(c.environment.lookup({0, -1, 0}) == Vec3{1, 1, 1});
    CHECK(c.materials.default_params.base_color == Vec3{0.5});
    REQUIRE(c.materials.entries.size() == 1);
    CHECK(c.materials.entries[0].overrides.base_metalness == 1.0);

    const RenderConfig empty = parse_render_config("{}");
    CHECK_FALSE(empty.camera);
    CHECK(empty.environment.lookup({0, 0, 1}) == Vec3{1});

    CHECK_THROWS_WITH_AS(parse_render_config(R"({"lights": []})"),
                         doctest::Contains("unknown key 'lights'"), Error);
    CHECK_THROWS_WITH_AS(parse_render_config(R"({"camera": {"position": [0, 0, 0]}})"),
                         doctest::Contains("camera"), Error);
    CHECK_THROWS_WITH_AS(
        parse_render_config(R"({"materials": {"entries": [{"match": "a*b", "params": {}}]}})"),
        doctest::Contains("single '*'"), Error);
    CHECK_THROWS_WITH_AS(
        parse_render_config(R"({"materials": {"default": {"base_metalness": 3}}})"),
        doctest::Contains("base_metalness"), Error);
    CHECK_THROWS_WITH_AS(parse_render_config(R"({"environment": {"type": "uniform", "radiance": [-1, 0, 0]}})"),
                         doctest::Contains("radiance"), Error);
    CHECK_THROWS_WITH_AS(parse_render_config("{"), doctest::Contains("malformed JSON"), Error);
}

TEST_CASE("transforms") {
    const Mat4 m = mat4_from_trs({1, 2, 3}, {0, 0, std::sin(kPi / 4), std::cos(kPi / 4)}, {2, 2, 2});
    const Vec3 p = transform_point(m, {1, 0, 0});
    CHECK(p.x == doctest::Approx(1));
    CHECK(p.y == doctest::Approx(4));
    CHECK(p.z == doctest::Approx(3));
    const Vec3 n = transform_normal(mat4_from_trs({}, {0, 0, 0, 1}, {1, 2, 1}), normalize(Vec3{1, 1, 0}));
    CHECK(n.x == doctest::Approx(2 / std::sqrt(5.0)));
    CHECK(n.y == doctest::Approx(1 / std::sqrt(5.0)));
    // Mirroring keeps the normal on the outside.
    const Vec3 mirrored = transform_normal(mat4_from_trs({}, {0, 0, 0, 1}, {-1, 1, 1}), {1, 0, 0});
    CHECK(mirrored.x == doctest::Approx(-1));
    const Mat4 id = mat4_multiply(mat4_identity(), m);
    CHECK(id == m);
}

TEST_CASE("frame_bounds looks at the box centre") {
    const CameraConfig cam = frame_bounds(Aabb{{-1, -1, -1}, {1, 1, 1}}, 64, 32, 45);
    CHECK(cam.look_at == Vec3{0, 0, 0});
    CHECK(cam.position.z > 1);
    CHECK(cam.width == 64);
    CHECK(cam.height == 32);
    CHECK(validate_camera(cam).empty());
}
