// Copyright 2026 The Glint Authors
// SPDX-License-Identifier: Apache-2.0

#include "glint/geometry.hpp"

namespace glint {

namespace {

constexpr real kDeterminantEpsilon = 1e-9;

// Rounding bound for the slab test, as in pbrt's gamma(3).
constexpr real kSlabGamma3 = 3 * std::numeric_limits<real>::epsilon() /
                             (1 - 3 * std::numeric_limits<real>::epsilon());

}  // namespace

bool ray_triangle_t(const Ray &ray, const Triangle &tri, real &t, real &u, real &v) {
    const Vec3 e1 = tri.v1 - tri.v0;
    const Vec3 e2 = tri.v2 - tri.v0;
    const Vec3 p = cross(ray.direction, e2);
    const real det = dot(e1, p);
    if (std::abs(det) < kDeterminantEpsilon) return false;
    const real inv_det = 1 / det;
    const Vec3 s = ray.origin - tri.v0;
    u = dot(s, p) * inv_det;
    if (u < 0 || u > 1) return false;
    const Vec3 q = cross(s, e1);
    v = dot(ray.direction, q) * inv_det;
    if (v < 0 || u + v > 1) return false;
    t = dot(e2, q) * inv_det;
    return t >= ray.t_min && t <= ray.t_max;
}

Hit make_hit(const Ray &ray, const Triangle &tri, std::uint32_t index, real t, real u, real v) {
    Hit hit;
    hit.t = t;
    hit.triangle_index = index;
    hit.barycentric_u = u;
    hit.barycentric_v = v;

    Vec3 ng = normalize(cross(tri.v1 - tri.v0, tri.v2 - tri.v0));
    hit.is_front_face = dot(ng, ray.direction) < 0;
    if (!hit.is_front_face) ng = -ng;
    hit.geometric_normal = ng;

    const Vec3 interpolated = (1 - u - v) * tri.n0 + u * tri.n1 + v * tri.n2;
    const real len = length(interpolated);
    if (!(len > 1e-12)) {
        hit.shading_normal = ng;
    } else {
        Vec3 ns = interpolated / len;
        hit.shading_normal = dot(ns, ng) < 0 ? -ns : ns;
    }
    return hit;
}

std::optional<Hit> ray_triangle_intersect(const Ray &ray, const Triangle &tri) {
    real t, u, v;
    if (!ray_triangle_t(ray, tri, t, u, v)) return std::nullopt;
    return make_hit(ray, tri, 0, t, u, v);
}

std::optional<std::pair<real, real>> ray_aabb_intersect(const Ray &ray, const Aabb &box,
                                                        const Vec3 &inv_dir) {
    real t_enter = ray.t_min;
    real t_exit = ray.t_max;
    for (int axis = 0; axis < 3; ++axis) {
        const real o = ray.origin[axis];
        if (ray.direction[axis] == 0) {
            // Parallel to the slab: inside or never.
            if (o < box.min[axis] || o > box.max[axis]) return std::nullopt;
            continue;
        }
        real t0 = (box.min[axis] - o) * inv_dir[axis];
        real t1 = (box.max[axis] - o) * inv_dir[axis];
        if (t0 > t1) std::swap(t0, t1);
        t1 *= 1 + 2 * kSlabGamma3;
        t_enter = t0 > t_enter ? t0 : t_enter;
        t_exit = t1 < t_exit ? t1 : t_exit;
        if (t_enter > t_exit) return std::nullopt;
    }
    return std::pair{t_enter, t_exit};
}

Aabb aabb_union(const Aabb &a, const Aabb &b) {
    return {min(a.min, b.min), max(a.max, b.max)};
}

Aabb aabb_union(const Aabb &a, const Vec3 &p) { return {min(a.min, p), max(a.max, p)}; }

Aabb triangle_bounds(const Triangle &tri) {
    Aabb box{min(tri.v0, min(tri.v1, tri.v2)), max(tri.v0, max(tri.v1, tri.v2))};
    const real pad = 1e-7 * max_component(box.max - box.min);
    box.min -= Vec3{pad};
    box.max += Vec3{pad};
    return box;
}

}  // namespace glint
