// Copyright 2026 The Glint Authors
// SPDX-License-Identifier: Apache-2.0

#include "glint/bvh.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <numeric>
#include <sstream>

#include "glint/error.hpp"

namespace glint {

namespace {

constexpr int kBinCount = 12;
constexpr real kTraversalCost = 1;
constexpr real kIntersectCost = 1;
// Depth cap so the fixed traversal stack can never overflow.
constexpr int kMaxBuildDepth = 60;
constexpr int kStackSize = 64;
constexpr real kContainmentTolerance = 1e-6;

struct PrimRef {
    Aabb bounds;
    Vec3 centroid;
};

struct BuildTask {
    std::uint32_t node;
    std::uint32_t begin, end;
    int depth;
};

struct Bin {
    Aabb bounds;
    std::uint32_t count = 0;
};

int bin_of(real c, real lo, real scale) {
    int b = static_cast<int>((c - lo) * scale);
    return std::clamp(b, 0, kBinCount - 1);
}

}  // namespace

Bvh build_bvh(std::span<const Triangle> triangles) {
    if (triangles.empty()) throw EmptySceneError();
    const auto started = std::chrono::steady_clock::now();

    const auto n = static_cast<std::uint32_t>(triangles.size());
    std::vector<PrimRef> prims(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        prims[i].bounds = triangle_bounds(triangles[i]);
        prims[i].centroid = prims[i].bounds.centroid();
    }

    Bvh bvh;
    bvh.triangle_order.resize(n);
    std::iota(bvh.triangle_order.begin(), bvh.triangle_order.end(), 0u);
    auto &order = bvh.triangle_order;
    auto &nodes = bvh.nodes;
    nodes.reserve(2 * static_cast<std::size_t>(n));
    nodes.emplace_back();

    std::vector<BuildTask> tasks;
    tasks.push_back({0, 0, n, 1});
    while (!tasks.empty()) {
        const BuildTask task = tasks.back();
        tasks.pop_back();
        bvh.stats.max_depth = std::max(bvh.stats.max_depth, task.depth);

        Aabb bounds, centroid_bounds;
        for (std::uint32_t i = task.begin; i < task.end; ++i) {
            const PrimRef &p = prims[order[i]];
            bounds = aabb_union(bounds, p.bounds);
            centroid_bounds = aabb_union(centroid_bounds, p.centroid);
        }
        nodes[task.node].bounds = bounds;

        const std::uint32_t count = task.end - task.begin;
        auto make_leaf = [&] {
            BvhNode &node = nodes[task.node];
            node.is_leaf = true;
            node.left_or_first = task.begin;
            node.right_or_count = count;
        };
        if (count == 1 || task.depth >= kMaxBuildDepth) {
            make_leaf();
            continue;
        }

        const int axis = centroid_bounds.largest_axis();
        const real lo = centroid_bounds.min[axis];
        const real spread = centroid_bounds.max[axis] - lo;
        const real parent_area = bounds.surface_area();
        std::uint32_t mid = task.begin + count / 2;
        bool median_split = true;

        if (spread > 0 && parent_area > 0) {
            std::array<Bin, kBinCount> bins{};
            const real scale = kBinCount / spread;
            for (std::uint32_t i = task.begin; i < task.end; ++i) {
                const PrimRef &p = prims[order[i]];
                Bin &b = bins[bin_of(p.centroid[axis], lo, scale)];
                b.bounds = aabb_union(b.bounds, p.bounds);
                ++b.count;
            }
            // Suffix sweep for the right side, prefix sweep for the left.
            std::array<real, kBinCount> right_area{};
            std::array<std::uint32_t, kBinCount> right_count{};
            Aabb acc;
            std::uint32_t acc_count = 0;
            for (int i = kBinCount - 1; i > 0; --i) {
                acc = aabb_union(acc, bins[i].bounds);
                acc_count += bins[i].count;
                right_area[i] = acc.surface_area();
                right_count[i] = acc_count;
            }
            real best_cost = kInfinity;
            int best_split = -1;
            acc = Aabb{};
            acc_count = 0;
            for (int i = 1; i < kBinCount; ++i) {
                acc = aabb_union(acc, bins[i - 1].bounds);
                acc_count += bins[i - 1].count;
                if (acc_count == 0 || right_count[i] == 0) continue;
                const real cost =
                    kTraversalCost + kIntersectCost *
                                         (acc.surface_area() * acc_count +
                                          right_area[i] * right_count[i]) /
                                         parent_area;
                if (cost < best_cost) {
                    best_cost = cost;
                    best_split = i;
                }
            }
            if (best_split > 0) {
                if (best_cost >= kIntersectCost * count) {
                    make_leaf();
                    continue;
                }
                auto first = order.begin() + task.begin;
                auto split = std::partition(first, order.begin() + task.end,
                                            [&](std::uint32_t idx) {
                                                return bin_of(prims[idx].centroid[axis], lo,
                                                              scale) < best_split;
                                            });
                mid = static_cast<std::uint32_t>(split - order.begin());
                median_split = false;
            }
        }
        if (median_split) {
            std::nth_element(order.begin() + task.begin, order.begin() + mid,
                             order.begin() + task.end, [&](std::uint32_t a, std::uint32_t b) {
                                 const real ca = prims[a].centroid[axis];
                                 const real cb = prims[b].centroid[axis];
                                 return ca < cb || (ca == cb && a < b);
                             });
        }

        const auto left = static_cast<std::uint32_t>(nodes.size());
        nodes.emplace_back();
        nodes.emplace_back();
        BvhNode &node = nodes[task.node];
        node.is_leaf = false;
        node.left_or_first = left;
        node.right_or_count = left + 1;
        tasks.push_back({left + 1, mid, task.end, task.depth + 1});
        tasks.push_back({left, task.begin, mid, task.depth + 1});
    }

    bvh.stats.node_count = nodes.size();
    bvh.stats.leaf_count = static_cast<std::size_t>(
        std::count_if(nodes.begin(), nodes.end(), [](const BvhNode &b) { return b.is_leaf; }));
    bvh.stats.build_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
            .count();
    return bvh;
}

namespace {

struct StackEntry {
    std::uint32_t node;
    real t_enter;
};

// Shared traversal; `any_hit` returns on the first accepted triangle.
template <bool any_hit>
std::optional<Hit> traverse(const Bvh &bvh, std::span<const Triangle> triangles,
                            const Ray &ray, TraversalStats *stats) {
    if (bvh.nodes.empty()) return std::nullopt;
    const Vec3 inv_dir = inverse_direction(ray.direction);
    Ray clipped = ray;

    if (stats) ++stats->nodes_visited;
    if (!ray_aabb_intersect(clipped, bvh.nodes[0].bounds, inv_dir)) return std::nullopt;

    std::array<StackEntry, kStackSize> stack;
    int sp = 0;
    std::uint32_t current = 0;
    bool found = false;
    std::uint32_t best_index = 0;
    real best_t = ray.t_max, best_u = 0, best_v = 0;

    for (;;) {
        const BvhNode &node = bvh.nodes[current];
        if (node.is_leaf) {
            const std::uint32_t end = node.first_triangle() + node.triangle_count();
            for (std::uint32_t i = node.first_triangle(); i < end; ++i) {
                const std::uint32_t index = bvh.triangle_order[i];
                if (stats) ++stats->triangle_tests;
                real t, u, v;
                clipped.t_max = best_t;
                if (!ray_triangle_t(clipped, triangles[index], t, u, v)) continue;
                if (!found || t < best_t || (t == best_t && index < best_index)) {
                    found = true;
                    best_t = t;
                    best_u = u;
                    best_v = v;
                    best_index = index;
                    if constexpr (any_hit) {
                        return make_hit(ray, triangles[index], index, t, u, v);
                    }
                }
            }
        } else {
            clipped.t_max = best_t;
            const std::uint32_t l = node.left_child(), r = node.right_child();
            if (stats) stats->nodes_visited += 2;
            const auto hit_l = ray_aabb_intersect(clipped, bvh.nodes[l].bounds, inv_dir);
            const auto hit_r = ray_aabb_intersect(clipped, bvh.nodes[r].bounds, inv_dir);
            if (hit_l && hit_r) {
                const bool left_first = hit_l->first <= hit_r->first;
                stack[sp++] = left_first ? StackEntry{r, hit_r->first}
                                         : StackEntry{l, hit_l->first};
                current = left_first ? l : r;
                continue;
            }
            if (hit_l) {
                current = l;
                continue;
            }
            if (hit_r) {
                current = r;
                continue;
            }
        }
        // Pop, skipping subtrees that start beyond the current best hit.
        bool advanced = false;
        while (sp > 0) {
            const StackEntry e = stack[--sp];
            if (e.t_enter > best_t) continue;
            current = e.node;
            advanced = true;
            break;
        }
        if (!advanced) break;
    }

    if (!found) return std::nullopt;
    return make_hit(ray, triangles[best_index], best_index, best_t, best_u, best_v);
}

}  // namespace

std::optional<Hit> intersect_scene(const Bvh &bvh, std::span<const Triangle> triangles,
                                   const Ray &ray, TraversalStats *stats) {
    return traverse<false>(bvh, triangles, ray, stats);
}

bool intersect_any(const Bvh &bvh, std::span<const Triangle> triangles, const Ray &ray,
                   TraversalStats *stats) {
    return traverse<true>(bvh, triangles, ray, stats).has_value();
}

std::vector<BvhViolation> validate_bvh(const Bvh &bvh, std::span<const Triangle> triangles) {
    std::vector<BvhViolation> out;
    auto report = [&](std::int64_t node, auto &&...parts) {
        std::ostringstream msg;
        (msg << ... << parts);
        out.push_back({node, msg.str()});
    };

    const std::size_t n = triangles.size();
    if (bvh.nodes.empty()) {
        report(-1, "bvh has no nodes");
        return out;
    }
    if (bvh.triangle_order.size() != n) {
        report(-1, "triangle_order has ", bvh.triangle_order.size(), " entries for ", n,
               " triangles");
    }
    std::vector<int> order_seen(n, 0);
    for (std::uint32_t idx : bvh.triangle_order) {
        if (idx >= n) {
            report(-1, "triangle_order entry ", idx, " out of range");
        } else if (++order_seen[idx] == 2) {
            report(-1, "triangle ", idx, " appears more than once in triangle_order");
        }
    }

    std::vector<int> leaf_seen(n, 0);
    std::vector<char> visited(bvh.nodes.size(), 0);
    std::vector<std::uint32_t> stack{0};
    while (!stack.empty()) {
        const std::uint32_t index = stack.back();
        stack.pop_back();
        if (visited[index]) {
            report(index, "node reached more than once");
            continue;
        }
        visited[index] = 1;
        const BvhNode &node = bvh.nodes[index];
        if (node.is_leaf) {
            if (node.triangle_count() == 0) report(index, "leaf with no triangles");
            const std::size_t end =
                static_cast<std::size_t>(node.first_triangle()) + node.triangle_count();
            if (end > bvh.triangle_order.size()) {
                report(index, "leaf range exceeds triangle_order");
                continue;
            }
            bool contained = true;
            for (std::size_t i = node.first_triangle(); i < end; ++i) {
                const std::uint32_t tri = bvh.triangle_order[i];
                if (tri >= n) continue;
                ++leaf_seen[tri];
                if (!node.bounds.contains(triangle_bounds(triangles[tri]),
                                          kContainmentTolerance)) {
                    contained = false;
                }
            }
            if (!contained) report(index, "leaf bounds do not contain all of its triangles");
            continue;
        }
        for (std::uint32_t child : {node.left_child(), node.right_child()}) {
            if (child <= index || child >= bvh.nodes.size()) {
                report(index, "child index ", child, " is invalid");
                continue;
            }
            if (!node.bounds.contains(bvh.nodes[child].bounds, kContainmentTolerance)) {
                report(index, "bounds do not contain child ", child);
            }
            stack.push_back(child);
        }
    }
    for (std::size_t i = 0; i < visited.size(); ++i) {
        if (!visited[i]) report(static_cast<std::int64_t>(i), "node unreachable from root");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (leaf_seen[i] != 1) {
            report(-1, "triangle ", i, " appears in ", leaf_seen[i], " leaves");
        }
    }
    return out;
}

}  // namespace glint
