// Copyright 2026 The Glint Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "glint/geometry.hpp"

namespace glint {

struct BvhNode {
    Aabb bounds;
    // Internal node: left and right child indices. Leaf: first entry in
    // Bvh::triangle_order and the number of triangles.
    std::uint32_t left_or_first = 0;
    std::uint32_t right_or_count = 0;
    bool is_leaf = false;

    std::uint32_t left_child() const { return left_or_first; }
    std::uint32_t right_child() const { return right_or_count; }
    std::uint32_t first_triangle() const { return left_or_first; }
    std::uint32_t triangle_count() const { return right_or_count; }

    friend bool operator==(const BvhNode &, const BvhNode &) = default;
};

struct BuildStats {
    std::size_t node_count = 0;
    std::size_t leaf_count = 0;
    int max_depth = 0;
    double build_time_ms = 0;
};

struct Bvh {
    std::vector<BvhNode> nodes;  // nodes[0] is the root
    std::vector<std::uint32_t> triangle_order;
    BuildStats stats;
};

// Optional per-query counters, used to check early rejection and the
// logarithmic work bound.
struct TraversalStats {
    std::uint64_t nodes_visited = 0;
    std::uint64_t triangle_tests = 0;
};

// Binned SAH, 12 bins on the axis of largest centroid spread. Throws
// glint::EmptySceneError on empty input.
Bvh build_bvh(std::span<const Triangle> triangles);

// Nearest hit; ties in t go to the lower triangle index.
std::optional<Hit> intersect_scene(const Bvh &bvh, std::span<const Triangle> triangles,
                                   const Ray &ray, TraversalStats *stats = nullptr);

// Occlusion query: true iff intersect_scene would report a hit.
bool intersect_any(const Bvh &bvh, std::span<const Triangle> triangles, const Ray &ray,
                   TraversalStats *stats = nullptr);

struct BvhViolation {
    std::int64_t node_index;  // -1 when the violation is not tied to a node
    std::string message;
};

std::vector<BvhViolation> validate_bvh(const Bvh &bvh, std::span<const Triangle> triangles);

}  // namespace glint
