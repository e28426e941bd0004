// Copyright 2026 The Glint Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>

namespace glint {

using real = double;

inline constexpr real kPi = 3.14159265358979323846;
inline constexpr real kInfinity = std::numeric_limits<real>::infinity();

struct Vec3 {
    real x = 0, y = 0, z = 0;

    constexpr Vec3() = default;
    constexpr Vec3(real x_, real y_, real z_) : x(x_), y(y_), z(z_) {}
    constexpr explicit Vec3(real v) : x(v), y(v), z(v) {}

    constexpr real operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
    constexpr real &operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }

    constexpr Vec3 operator-() const { return {-x, -y, -z}; }
    constexpr Vec3 &operator+=(const Vec3 &o) { x += o.x; y += o.y; z += o.z; return *this; }
    constexpr Vec3 &operator-=(const Vec3 &o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    constexpr Vec3 &operator*=(const Vec3 &o) { x *= o.x; y *= o.y; z *= o.z; return *this; }
    constexpr Vec3 &operator*=(real s) { x *= s; y *= s; z *= s; return *this; }
    constexpr Vec3 &operator/=(real s) { return *this *= (1 / s); }

    friend constexpr bool operator==(const Vec3 &, const Vec3 &) = default;
};

constexpr Vec3 operator+(Vec3 a, const Vec3 &b) { return a += b; }
constexpr Vec3 operator-(Vec3 a, const Vec3 &b) { return a -= b; }
constexpr Vec3 operator*(Vec3 a, const Vec3 &b) { return a *= b; }
constexpr Vec3 operator*(Vec3 a, real s) { return a *= s; }
constexpr Vec3 operator*(real s, Vec3 a) { return a *= s; }
constexpr Vec3 operator/(Vec3 a, real s) { return a /= s; }
constexpr Vec3 operator/(const Vec3 &a, const Vec3 &b) { return {a.x / b.x, a.y / b.y, a.z / b.z}; }

constexpr real dot(const Vec3 &a, const Vec3 &b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3 &a, const Vec3 &b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline real length(const Vec3 &v) { return std::sqrt(dot(v, v)); }
inline Vec3 normalize(const Vec3 &v) { return v / length(v); }
constexpr Vec3 min(const Vec3 &a, const Vec3 &b) {
    return {std::min(a.x, b.x), std::min(a.y, b.y), std::min(a.z, b.z)};
}
constexpr Vec3 max(const Vec3 &a, const Vec3 &b) {
    return {std::max(a.x, b.x), std::max(a.y, b.y), std::max(a.z, b.z)};
}
constexpr real max_component(const Vec3 &v) { return std::max(v.x, std::max(v.y, v.z)); }
constexpr real min_component(const Vec3 &v) { return std::min(v.x, std::min(v.y, v.z)); }
constexpr real mean_component(const Vec3 &v) { return (v.x + v.y + v.z) / 3; }
inline bool is_finite(const Vec3 &v) {
    return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}
// Mirror of `v` about `n` (both pointing away from the surface).
constexpr Vec3 reflect(const Vec3 &v, const Vec3 &n) { return 2 * dot(v, n) * n - v; }

struct Ray {
    Vec3 origin;
    Vec3 direction;  // unit length
    real t_min = 0;
    real t_max = kInfinity;

    constexpr Vec3 at(real t) const { return origin + t * direction; }
};

struct Triangle {
    Vec3 v0, v1, v2;
    Vec3 n0, n1, n2;  // unit shading normals
    std::uint32_t material_index = 0;

    friend bool operator==(const Triangle &, const Triangle &) = default;
};

// An empty box is min = +inf, max = -inf; union with it is the identity.
struct Aabb {
    Vec3 min{kInfinity};
    Vec3 max{-kInfinity};

    bool empty() const { return min.x > max.x || min.y > max.y || min.z > max.z; }
    Vec3 extent() const { return empty() ? Vec3{} : max - min; }
    Vec3 centroid() const { return (min + max) * real(0.5); }
    real surface_area() const {
        if (empty()) return 0;
        Vec3 d = max - min;
        return 2 * (d.x * d.y + d.y * d.z + d.z * d.x);
    }
    int largest_axis() const {
        Vec3 d = extent();
        return (d.x >= d.y && d.x >= d.z) ? 0 : (d.y >= d.z ? 1 : 2);
    }
    bool contains(const Vec3 &p, real tolerance = 0) const {
        return p.x >= min.x - tolerance && p.x <= max.x + tolerance &&
               p.y >= min.y - tolerance && p.y <= max.y + tolerance &&
               p.z >= min.z - tolerance && p.z <= max.z + tolerance;
    }
    bool contains(const Aabb &b, real tolerance = 0) const {
        return b.empty() || (contains(b.min, tolerance) && contains(b.max, tolerance));
    }
    void expand(const Vec3 &p) {
        min = glint::min(min, p);
        max = glint::max(max, p);
    }

    friend bool operator==(const Aabb &, const Aabb &) = default;
};

struct Hit {
    real t = kInfinity;
    std::uint32_t triangle_index = 0;
    real barycentric_u = 0, barycentric_v = 0;
    // Both normals face the side the ray arrived from.
    Vec3 geometric_normal;
    Vec3 shading_normal;
    bool is_front_face = true;
};

// Double-sided Moller-Trumbore. Accepts t in [ray.t_min, ray.t_max].
std::optional<Hit> ray_triangle_intersect(const Ray &ray, const Triangle &tri);

// t-only variant of the kernel used by traversal; returns the same decision
// and t as ray_triangle_intersect without building the Hit record.
bool ray_triangle_t(const Ray &ray, const Triangle &tri, real &t, real &u, real &v);

// Fills the normals and orientation of a hit whose t/u/v are known.
Hit make_hit(const Ray &ray, const Triangle &tri, std::uint32_t index, real t, real u, real v);

// Slab test. `inv_dir` = 1 / direction componentwise (+-inf for zero components).
// The interval is clipped to [t_min, t_max].
std::optional<std::pair<real, real>> ray_aabb_intersect(const Ray &ray, const Aabb &box,
                                                        const Vec3 &inv_dir);

Aabb aabb_union(const Aabb &a, const Aabb &b);
Aabb aabb_union(const Aabb &a, const Vec3 &p);

// Vertex bounds padded by 1e-7 of the largest extent.
Aabb triangle_bounds(const Triangle &tri);

inline Vec3 inverse_direction(const Vec3 &d) { return {1 / d.x, 1 / d.y, 1 / d.z}; }

}  // namespace glint
