// Copyright 2026 The Glint Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "glint/geometry.hpp"

namespace glint {

// Subset of the OpenPBR surface slots: base, specular and emission.
// Defaults follow the OpenPBR reference values.
struct OpenPbrParams {
    real base_weight = 1;
    Vec3 base_color{0.8};
    real base_metalness = 0;
    real specular_weight = 1;
    Vec3 specular_color{1};
    real specular_roughness = 0.3;
    real specular_ior = 1.5;
    real emission_luminance = 0;
    Vec3 emission_color{1};

    friend bool operator==(const OpenPbrParams &, const OpenPbrParams &) = default;
};

// Names each out-of-range field; empty when the parameters are legal.
std::vector<std::string> validate_params(const OpenPbrParams &params);

inline constexpr real kMinAlpha = 1e-4;
// GGX lobes at or below this alpha are reported as specular spikes.
inline constexpr real kSpikeAlpha = 1e-3;

real roughness_to_alpha(real roughness);
real f0_from_ior(real ior);

Vec3 fresnel_schlick(real cos_theta, const Vec3 &f0);
real ggx_ndf(real n_dot_h, real alpha);
// Smith Lambda for GGX, as a function of cos(theta).
real smith_lambda(real cos_theta, real alpha);
real smith_g1(real cos_theta, real alpha);
// Height-correlated masking-shadowing.
real smith_g2(real cos_o, real cos_i, real alpha);

Vec3 emitted_radiance(const OpenPbrParams &params);

struct BsdfLobes {
    Vec3 diffuse;     // already scaled by (1 - metalness)
    Vec3 dielectric;  // already scaled by (1 - metalness)
    Vec3 metal;       // already scaled by metalness
    Vec3 total() const { return diffuse + dielectric + metal; }
};

// Per-lobe split of eval_bsdf.
BsdfLobes eval_bsdf_lobes(const Vec3 &wo, const Vec3 &wi, const Vec3 &n,
                          const OpenPbrParams &params);

// f(wo, wi) per steradian; zero when either direction is below the surface.
Vec3 eval_bsdf(const Vec3 &wo, const Vec3 &wi, const Vec3 &n, const OpenPbrParams &params);

struct BsdfSample {
    Vec3 direction;
    real pdf = 0;  // 0 means the sample is invalid and the path should stop
    Vec3 throughput_weight;  // f * cos / pdf
    bool is_specular_spike = false;
};

struct LobeProbabilities {
    real ggx = 0;
    real diffuse = 0;
};

LobeProbabilities lobe_probabilities(real cos_o, const OpenPbrParams &params);

// u0 picks the lobe, (u1, u2) drive the direction.
BsdfSample sample_bsdf(const Vec3 &wo, const Vec3 &n, const OpenPbrParams &params, real u0,
                       real u1, real u2);

real pdf_bsdf(const Vec3 &wo, const Vec3 &wi, const Vec3 &n, const OpenPbrParams &params);

// Orthonormal basis around a unit normal (Duff et al.).
struct Frame {
    Vec3 t, b, n;

    static Frame from_normal(const Vec3 &n);
    Vec3 to_local(const Vec3 &v) const { return {dot(v, t), dot(v, b), dot(v, n)}; }
    Vec3 to_world(const Vec3 &v) const { return v.x * t + v.y * b + v.z * n; }
};

Vec3 sample_cosine_hemisphere(real u1, real u2);
// Visible-normal sampling of GGX (Heitz 2018); wo and the result are local.
Vec3 sample_ggx_vndf(const Vec3 &wo_local, real alpha, real u1, real u2);

}  // namespace glint
