// Copyright 2026 The Glint Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "glint/geometry.hpp"

namespace glint {

struct Accumulator;

// Row-major RGB; linear or display-encoded depending on the stage.
struct ImageBuffer {
    int width = 0, height = 0;
    std::vector<Vec3> pixels;

    ImageBuffer() = default;
    ImageBuffer(int w, int h) : width(w), height(h), pixels(static_cast<std::size_t>(w) * h) {}
    Vec3 &at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
    const Vec3 &at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

// Khronos PBR Neutral tone mapping constants.
namespace pbr_neutral {
inline constexpr real kStartCompression = 0.8 - 0.04;
inline constexpr real kDesaturation = 0.15;
inline constexpr real kBlackKnee = 0.08;
inline constexpr real kMaxOffset = 0.04;
}  // namespace pbr_neutral

Vec3 pbr_neutral_tonemap(const Vec3 &color);

real linear_to_srgb(real c);
Vec3 linear_to_srgb(const Vec3 &c);
real srgb_to_linear(real c);

// Accumulate -> tone map -> sRGB.
ImageBuffer display_encode(const Accumulator &acc);
ImageBuffer display_encode(const ImageBuffer &linear);

// round(255 * v) per channel, row-major RGB bytes.
std::vector<std::uint8_t> quantize_rgb8(const ImageBuffer &display);

// 8-bit RGB PNG, no alpha.
std::vector<std::uint8_t> encode_png(const ImageBuffer &display);
void write_png(const ImageBuffer &display, const std::filesystem::path &path);

// Headerless float32 RGB triplets, row-major, little-endian.
void write_linear_dump(const Accumulator &acc, const std::filesystem::path &path);
std::vector<float> read_linear_dump(const std::filesystem::path &path);

}  // namespace glint
