// Copyright 2026 The Glint Authors
// SPDX-License-Identifier: Apache-2.0

#include "glint/image.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include <zlib.h>

#include "glint/error.hpp"
#include "glint/integrator.hpp"

namespace glint {

Vec3 pbr_neutral_tonemap(const Vec3 &input) {
    using namespace pbr_neutral;
    Vec3 color = input;
    const real x = min_component(color);
    const real offset = x < kBlackKnee ? x - 6.25 * x * x : kMaxOffset;
    color -= Vec3{offset};

    const real peak = max_component(color);
    if (peak < kStartCompression) return color;

    const real d = 1 - kStartCompression;
    const real new_peak = 1 - d * d / (peak + d - kStartCompression);
    color *= new_peak / peak;
    const real g = 1 - 1 / (kDesaturation * (peak - new_peak) + 1);
    return color * (1 - g) + Vec3{new_peak} * g;
}

real linear_to_srgb(real c) {
    if (c <= 0.0031308) return 12.92 * c;
    return 1.055 * std::pow(c, 1 / 2.4) - 0.055;
}

Vec3 linear_to_srgb(const Vec3 &c) {
    return {linear_to_srgb(c.x), linear_to_srgb(c.y), linear_to_srgb(c.z)};
}

real srgb_to_linear(real c) {
    if (c <= 0.04045) return c / 12.92;
    return std::pow((c + 0.055) / 1.055, 2.4);
}

namespace {

Vec3 clamp_unit(const Vec3 &v) {
    auto c = [](real x) { return std::clamp(x, real(0), real(1)); };
    return {c(v.x), c(v.y), c(v.z)};
}

}  // namespace

ImageBuffer display_encode(const ImageBuffer &linear) {
    ImageBuffer out(linear.width, linear.height);
    for (std::size_t i = 0; i < linear.pixels.size(); ++i) {
        out.pixels[i] = clamp_unit(linear_to_srgb(clamp_unit(pbr_neutral_tonemap(linear.pixels[i]))));
    }
    return out;
}

ImageBuffer display_encode(const Accumulator &acc) {
    ImageBuffer linear(acc.width, acc.height);
    linear.pixels = acc.mean;
    return display_encode(linear);
}

std::vector<std::uint8_t> quantize_rgb8(const ImageBuffer &img) {
    std::vector<std::uint8_t> bytes;
    bytes.reserve(img.pixels.size() * 3);
    for (const Vec3 &p : img.pixels) {
        for (int c = 0; c < 3; ++c) {
            const real v = std::clamp(p[c], real(0), real(1));
            bytes.push_back(static_cast<std::uint8_t>(std::lround(255 * v)));
        }
    }
    return bytes;
}

namespace {

void put_u32_be(std::vector<std::uint8_t> &out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

void put_chunk(std::vector<std::uint8_t> &out, const char type[4],
               const std::vector<std::uint8_t> &data) {
    put_u32_be(out, static_cast<std::uint32_t>(data.size()));
    const std::size_t type_at = out.size();
    out.insert(out.end(), type, type + 4);
    out.insert(out.end(), data.begin(), data.end());
    const uLong crc = crc32(0L, out.data() + type_at, static_cast<uInt>(4 + data.size()));
    put_u32_be(out, static_cast<std::uint32_t>(crc));
}

}  // namespace

std::vector<std::uint8_t> encode_png(const ImageBuffer &img) {
    const std::vector<std::uint8_t> rgb = quantize_rgb8(img);
    const std::size_t row_bytes = static_cast<std::size_t>(img.width) * 3;
    // Filter type 0 on every scanline.
    std::vector<std::uint8_t> raw;
    raw.reserve((row_bytes + 1) * img.height);
    for (int y = 0; y < img.height; ++y) {
        raw.push_back(0);
        const auto *row = rgb.data() + y * row_bytes;
        raw.insert(raw.end(), row, row + row_bytes);
    }
    uLongf compressed_size = compressBound(static_cast<uLong>(raw.size()));
    std::vector<std::uint8_t> compressed(compressed_size);
    if (compress2(compressed.data(), &compressed_size, raw.data(), static_cast<uLong>(raw.size()),
                  Z_BEST_COMPRESSION) != Z_OK) {
        throw Error("png: zlib compression failed");
    }
    compressed.resize(compressed_size);

    std::vector<std::uint8_t> png = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};
    std::vector<std::uint8_t> ihdr;
    put_u32_be(ihdr, static_cast<std::uint32_t>(img.width));
    put_u32_be(ihdr, static_cast<std::uint32_t>(img.height));
    ihdr.insert(ihdr.end(), {8, 2, 0, 0, 0});  // 8-bit, truecolour, deflate, no filter, no interlace
    put_chunk(png, "IHDR", ihdr);
    put_chunk(png, "IDAT", compressed);
    put_chunk(png, "IEND", {});
    return png;
}

void write_png(const ImageBuffer &img, const std::filesystem::path &path) {
    const auto bytes = encode_png(img);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write PNG '" + path.string() + "'");
    out.write(reinterpret_cast<const char *>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("cannot write PNG '" + path.string() + "'");
}

void write_linear_dump(const Accumulator &acc, const std::filesystem::path &path) {
    static_assert(std::endian::native == std::endian::little, "dump writer assumes little-endian");
    std::vector<float> data;
    data.reserve(acc.mean.size() * 3);
    for (const Vec3 &p : acc.mean) {
        data.push_back(static_cast<float>(p.x));
        data.push_back(static_cast<float>(p.y));
        data.push_back(static_cast<float>(p.z));
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write linear dump '" + path.string() + "'");
    out.write(reinterpret_cast<const char *>(data.data()),
              static_cast<std::streamsize>(data.size() * sizeof(float)));
    if (!out) throw Error("cannot write linear dump '" + path.string() + "'");
}

std::vector<float> read_linear_dump(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) throw Error("cannot open linear dump '" + path.string() + "'");
    const auto size = static_cast<std::size_t>(in.tellg());
    if (size % (3 * sizeof(float)) != 0)
        throw Error("linear dump '" + path.string() + "' is not a whole number of RGB triplets");
    std::vector<float> data(size / sizeof(float));
    in.seekg(0);
    in.read(reinterpret_cast<char *>(data.data()), static_cast<std::streamsize>(size));
    return data;
}

}  // namespace glint
