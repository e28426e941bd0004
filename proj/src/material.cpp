// Copyright 2026 The Glint Authors
// SPDX-License-Identifier: Apache-2.0

#include "glint/material.hpp"

#include <algorithm>
#include <cmath>

namespace glint {

namespace {

real pow5(real x) {
    const real x2 = x * x;
    return x2 * x2 * x;
}

real clamp01(real x) { return std::clamp(x, real(0), real(1)); }

// Scalar dielectric reflectance used both for the specular lobe and to
// couple the diffuse lobe beneath it.
real dielectric_reflectance(real cos_theta, const OpenPbrParams &p) {
    const real f0 = f0_from_ior(p.specular_ior);
    return p.specular_weight * (f0 + (1 - f0) * pow5(1 - clamp01(cos_theta)));
}

Vec3 metal_fresnel(real cos_theta, const OpenPbrParams &p) {
    const Vec3 f0 = p.base_weight * p.base_color;
    return f0 + (p.specular_color - f0) * pow5(1 - clamp01(cos_theta));
}

bool in_unit_range(real v) { return v >= 0 && v <= 1; }
bool in_unit_range(const Vec3 &v) {
    return in_unit_range(v.x) && in_unit_range(v.y) && in_unit_range(v.z);
}

}  // namespace

std::vector<std::string> validate_params(const OpenPbrParams &p) {
    std::vector<std::string> errors;
    auto check = [&](bool ok, const char *name, const char *range) {
        if (!ok) errors.push_back(std::string(name) + " must be in " + range);
    };
    check(in_unit_range(p.base_weight), "base_weight", "[0, 1]");
    check(in_unit_range(p.base_color), "base_color", "[0, 1]^3");
    check(in_unit_range(p.base_metalness), "base_metalness", "[0, 1]");
    check(in_unit_range(p.specular_weight), "specular_weight", "[0, 1]");
    check(in_unit_range(p.specular_color), "specular_color", "[0, 1]^3");
    check(in_unit_range(p.specular_roughness), "specular_roughness", "[0, 1]");
    check(p.specular_ior >= 1 && std::isfinite(p.specular_ior), "specular_ior", "[1, inf)");
    check(p.emission_luminance >= 0 && std::isfinite(p.emission_luminance),
          "emission_luminance", "[0, inf)");
    check(in_unit_range(p.emission_color), "emission_color", "[0, 1]^3");
    return errors;
}

real roughness_to_alpha(real roughness) { return std::max(roughness * roughness, kMinAlpha); }

real f0_from_ior(real ior) {
    const real r = (ior - 1) / (ior + 1);
    return r * r;
}

Vec3 fresnel_schlick(real cos_theta, const Vec3 &f0) {
    return f0 + (Vec3{1} - f0) * pow5(1 - clamp01(cos_theta));
}

real ggx_ndf(real n_dot_h, real alpha) {
    if (n_dot_h <= 0) return 0;
    const real a2 = alpha * alpha;
    const real c2 = n_dot_h * n_dot_h;
    // 1 - c2 + c2*a2, arranged to keep precision near the peak.
    const real d = (1 - c2) + c2 * a2;
    return a2 / (kPi * d * d);
}

real smith_lambda(real cos_theta, real alpha) {
    if (cos_theta >= 1) return 0;
    const real c2 = cos_theta * cos_theta;
    const real tan2 = std::max(real(0), 1 - c2) / c2;
    return real(0.5) * (std::sqrt(1 + alpha * alpha * tan2) - 1);
}

real smith_g1(real cos_theta, real alpha) { return 1 / (1 + smith_lambda(cos_theta, alpha)); }

real smith_g2(real cos_o, real cos_i, real alpha) {
    return 1 / (1 + smith_lambda(cos_o, alpha) + smith_lambda(cos_i, alpha));
}

Vec3 emitted_radiance(const OpenPbrParams &p) { return p.emission_luminance * p.emission_color; }

BsdfLobes eval_bsdf_lobes(const Vec3 &wo, const Vec3 &wi, const Vec3 &n,
                          const OpenPbrParams &p) {
    BsdfLobes lobes;
    const real cos_o = dot(n, wo);
    const real cos_i = dot(n, wi);
    if (cos_o <= 0 || cos_i <= 0) return lobes;

    const real m = p.base_metalness;
    const real alpha = roughness_to_alpha(p.specular_roughness);
    const Vec3 h = normalize(wo + wi);
    const real o_dot_h = dot(wo, h);
    const real microfacet =
        ggx_ndf(dot(n, h), alpha) * smith_g2(cos_o, cos_i, alpha) / (4 * cos_o * cos_i);

    if (m < 1) {
        const real coupling =
            (1 - dielectric_reflectance(cos_o, p)) * (1 - dielectric_reflectance(cos_i, p));
        lobes.diffuse = (1 - m) * coupling * (p.base_weight / kPi) * p.base_color;
        lobes.dielectric =
            (1 - m) * microfacet * dielectric_reflectance(o_dot_h, p) * p.specular_color;
    }
    if (m > 0) lobes.metal = m * microfacet * metal_fresnel(o_dot_h, p);
    return lobes;
}

Vec3 eval_bsdf(const Vec3 &wo, const Vec3 &wi, const Vec3 &n, const OpenPbrParams &p) {
    return eval_bsdf_lobes(wo, wi, n, p).total();
}

LobeProbabilities lobe_probabilities(real cos_o, const OpenPbrParams &p) {
    const real m = p.base_metalness;
    const bool diffuse_active = p.base_weight * max_component(p.base_color) > 0;
    const bool specular_active = p.specular_weight * max_component(p.specular_color) > 0;
    real p_specular = 0;
    if (diffuse_active && specular_active) {
        p_specular = std::clamp(dielectric_reflectance(cos_o, p), real(0.05), real(0.95));
    } else if (specular_active) {
        p_specular = 1;
    }
    LobeProbabilities probs;
    probs.diffuse = (1 - m) * (1 - p_specular);
    probs.ggx = 1 - probs.diffuse;
    return probs;
}

real pdf_bsdf(const Vec3 &wo, const Vec3 &wi, const Vec3 &n, const OpenPbrParams &p) {
    const real cos_o = dot(n, wo);
    const real cos_i = dot(n, wi);
    if (cos_o <= 0 || cos_i <= 0) return 0;
    const LobeProbabilities probs = lobe_probabilities(cos_o, p);
    real pdf = probs.diffuse * cos_i / kPi;
    if (probs.ggx > 0) {
        const real alpha = roughness_to_alpha(p.specular_roughness);
        const Vec3 h = normalize(wo + wi);
        pdf += probs.ggx * smith_g1(cos_o, alpha) * ggx_ndf(dot(n, h), alpha) / (4 * cos_o);
    }
    return pdf;
}

Frame Frame::from_normal(const Vec3 &n) {
    const real sign = std::copysign(real(1), n.z);
    const real a = -1 / (sign + n.z);
    const real b = n.x * n.y * a;
    return {{1 + sign * n.x * n.x * a, sign * b, -sign * n.x}, {b, sign + n.y * n.y * a, -n.y},
            n};
}

Vec3 sample_cosine_hemisphere(real u1, real u2) {
    const real r = std::sqrt(u1);
    const real phi = 2 * kPi * u2;
    return {r * std::cos(phi), r * std::sin(phi), std::sqrt(std::max(real(0), 1 - u1))};
}

Vec3 sample_ggx_vndf(const Vec3 &wo, real alpha, real u1, real u2) {
    const Vec3 vh = normalize(Vec3{alpha * wo.x, alpha * wo.y, wo.z});
    const real lensq = vh.x * vh.x + vh.y * vh.y;
    const Vec3 t1 = lensq > 0 ? Vec3{-vh.y, vh.x, 0} / std::sqrt(lensq) : Vec3{1, 0, 0};
    const Vec3 t2 = cross(vh, t1);
    const real r = std::sqrt(u1);
    const real phi = 2 * kPi * u2;
    const real p1 = r * std::cos(phi);
    const real s = real(0.5) * (1 + vh.z);
    const real p2 = (1 - s) * std::sqrt(std::max(real(0), 1 - p1 * p1)) + s * r * std::sin(phi);
    const Vec3 nh = p1 * t1 + p2 * t2 + std::sqrt(std::max(real(0), 1 - p1 * p1 - p2 * p2)) * vh;
    return normalize(Vec3{alpha * nh.x, alpha * nh.y, std::max(real(0), nh.z)});
}

BsdfSample sample_bsdf(const Vec3 &wo, const Vec3 &n, const OpenPbrParams &p, real u0, real u1,
                       real u2) {
    BsdfSample sample;
    const real cos_o = dot(n, wo);
    if (cos_o <= 0) return sample;

    const LobeProbabilities probs = lobe_probabilities(cos_o, p);
    const real alpha = roughness_to_alpha(p.specular_roughness);
    const Frame frame = Frame::from_normal(n);
    const bool pick_ggx = u0 < probs.ggx;
    if (pick_ggx) {
        const Vec3 h = frame.to_world(sample_ggx_vndf(frame.to_local(wo), alpha, u1, u2));
        sample.direction = normalize(reflect(wo, h));
        sample.is_specular_spike = alpha <= kSpikeAlpha;
    } else {
        sample.direction = normalize(frame.to_world(sample_cosine_hemisphere(u1, u2)));
    }

    const real cos_i = dot(n, sample.direction);
    if (!(cos_i > 0)) return BsdfSample{sample.direction, 0, {}, sample.is_specular_spike};

    if (probs.diffuse == 0) {
        // Single GGX lobe: f*cos/pdf reduces to F * G2 / G1(wo), no D involved.
        const Vec3 h = normalize(wo + sample.direction);
        const real o_dot_h = dot(wo, h);
        const real m = p.base_metalness;
        Vec3 fresnel = m * metal_fresnel(o_dot_h, p);
        if (m < 1) fresnel += (1 - m) * dielectric_reflectance(o_dot_h, p) * p.specular_color;
        sample.pdf = pdf_bsdf(wo, sample.direction, n, p);
        sample.throughput_weight =
            fresnel * (smith_g2(cos_o, cos_i, alpha) / smith_g1(cos_o, alpha));
    } else {
        sample.pdf = pdf_bsdf(wo, sample.direction, n, p);
        if (!(sample.pdf > 0) || !std::isfinite(sample.pdf)) {
            return BsdfSample{sample.direction, 0, {}, sample.is_specular_spike};
        }
        sample.throughput_weight = eval_bsdf(wo, sample.direction, n, p) * (cos_i / sample.pdf);
    }
    if (!(sample.pdf > 0) || !std::isfinite(sample.pdf)) sample.pdf = 0;
    return sample;
}

}  // namespace glint
