// Copyright 2026 The Glint Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "glint/geometry.hpp"
#include "glint/material.hpp"

namespace glint {

struct CameraConfig {
    Vec3 position{0, 0, 3};
    Vec3 look_at{0, 0, 0};
    Vec3 up{0, 1, 0};
    real vertical_fov = 45;  // degrees
    int width = 512;
    int height = 512;

    friend bool operator==(const CameraConfig &, const CameraConfig &) = default;
};

std::vector<std::string> validate_camera(const CameraConfig &camera);

struct EnvironmentConfig {
    enum class Kind { uniform, gradient };
    Kind kind = Kind::uniform;
    Vec3 radiance{1};  // uniform
    Vec3 zenith{1};    // gradient
    Vec3 horizon{1};

    static EnvironmentConfig uniform(const Vec3 &radiance);
    static EnvironmentConfig gradient(const Vec3 &zenith, const Vec3 &horizon);

    // Gradient: horizon + (zenith - horizon) * max(0, d.y); flat horizon
    // colour below it.
    Vec3 lookup(const Vec3 &direction) const;

    friend bool operator==(const EnvironmentConfig &, const EnvironmentConfig &) = default;
};

// Overrides for a subset of OpenPbrParams; unset fields keep the base value.
struct OpenPbrOverrides {
    std::optional<real> base_weight;
    std::optional<Vec3> base_color;
    std::optional<real> base_metalness;
    std::optional<real> specular_weight;
    std::optional<Vec3> specular_color;
    std::optional<real> specular_roughness;
    std::optional<real> specular_ior;
    std::optional<real> emission_luminance;
    std::optional<Vec3> emission_color;

    OpenPbrParams apply(OpenPbrParams base) const;
};

struct MaterialMapEntry {
    // Exact name, or a prefix followed by a single trailing '*'.
    std::string pattern;
    OpenPbrOverrides overrides;

    bool matches(const std::string &name) const;
};

struct MaterialMap {
    std::vector<MaterialMapEntry> entries;
    OpenPbrParams default_params;

    // First matching entry, if any.
    const MaterialMapEntry *find(const std::string &name) const;
};

struct RenderConfig {
    std::optional<CameraConfig> camera;  // absent: frame the scene bounds
    EnvironmentConfig environment;
    MaterialMap materials;
};

// Parses the render-config document (JSON); see docs/render-config.md.
RenderConfig parse_render_config(const std::string &json_text);
RenderConfig load_render_config(const std::filesystem::path &path);

// Intermediate glTF scene graph.
struct GltfPrimitive {
    std::vector<Vec3> positions;
    std::vector<Vec3> normals;  // generated when the file has none
    std::vector<std::uint32_t> indices;
    std::optional<std::size_t> material;
    bool normals_generated = false;
};

struct GltfMesh {
    std::string name;
    std::vector<GltfPrimitive> primitives;
};

// Column-major 4x4, as stored by glTF.
using Mat4 = std::array<real, 16>;

Mat4 mat4_identity();
Mat4 mat4_multiply(const Mat4 &a, const Mat4 &b);
Mat4 mat4_from_trs(const Vec3 &translation, const std::array<real, 4> &rotation_xyzw,
                   const Vec3 &scale);
Vec3 transform_point(const Mat4 &m, const Vec3 &p);
// Inverse-transpose of the upper 3x3 applied to `n`, renormalized.
Vec3 transform_normal(const Mat4 &m, const Vec3 &n);

struct GltfNode {
    std::string name;
    std::optional<std::size_t> mesh;
    std::vector<std::size_t> children;
    Mat4 local = mat4_identity();
};

// Only factors present in the file are recorded.
struct GltfMaterial {
    std::string name;
    std::optional<Vec3> base_color;
    std::optional<real> metallic;
    std::optional<real> roughness;
    std::optional<Vec3> emissive;
    real emissive_strength = 1;
};

struct GltfDocument {
    std::vector<GltfMesh> meshes;
    std::vector<GltfNode> nodes;
    std::vector<std::size_t> root_nodes;
    std::vector<GltfMaterial> materials;
};

// .gltf (external or data-URI buffers) or .glb.
GltfDocument load_gltf(const std::filesystem::path &path);
GltfDocument parse_gltf(const std::string &json_text,
                        const std::filesystem::path &base_dir = {},
                        const std::vector<std::uint8_t> *glb_bin = nullptr);

struct SceneDescription {
    std::vector<Triangle> triangles;
    std::vector<OpenPbrParams> materials;
    CameraConfig camera;
    EnvironmentConfig environment;
    std::size_t dropped_degenerate = 0;

    Aabb bounds() const;
    friend bool operator==(const SceneDescription &, const SceneDescription &) = default;
};

// Material slot i holds glTF material i; the last slot is the map default
// for primitives without a material.
OpenPbrParams resolve_material(const GltfMaterial &gltf, const MaterialMap &map);

SceneDescription flatten_scene(const GltfDocument &graph, const MaterialMap &material_map,
                               const CameraConfig &camera, const EnvironmentConfig &env);

// Camera looking at the box centre from above and in front (+z), far
// enough for the bounding sphere to fit with 10% margin.
CameraConfig frame_bounds(const Aabb &bounds, int width, int height, real vertical_fov = 45);

}  // namespace glint
