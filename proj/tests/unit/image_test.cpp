// Copyright 2026 The Glint Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <random>

#include "glint/error.hpp"
#include "glint/image.hpp"
#include "glint/integrator.hpp"
#include "support/oracles.hpp"

using namespace glint;

namespace {

// Khronos PBR Neutral, transcribed separately from the library version.
Vec3 reference_tonemap(Vec3 c) {
    const double x = std::min({c.x, c.y, c.z});
    const double offset = x < 0.08 ? x - 6.25 * x * x : 0.04;
    c = c - Vec3{offset};
    const double peak = std::max({c.x, c.y, c.z});
    if (peak < 0.76) return c;
    const double d = 1 - 0.76;
    const double new_peak = 1 - d * d / (peak + d - 0.76);
    c = c * (new_peak / peak);
    const double g = 1 - 1 / (0.15 * (peak - new_peak) + 1);
    return c * (1 - g) + Vec3{new_peak} * g;
}

std::filesystem::path temp_file(const std::string &name) {
    return std::filesystem::temp_directory_path() / ("glint_image_test_" + name);
}

}  // namespace

TEST_CASE("tone map fixtures") {
    CHECK(pbr_neutral_tonemap({0, 0, 0}) == Vec3{0, 0, 0});
    const Vec3 mid = pbr_neutral_tonemap({0.5, 0.5, 0.5});
    CHECK(glint::test::near(mid, Vec3{0.46}, 1e-4));
    const Vec3 hot = pbr_neutral_tonemap({1000, 1000, 1000});
    CHECK(glint::test::near(hot, Vec3{0.9999423677}, 1e-4));
    for (int c = 0; c < 3; ++c) {
        CHECK(hot[c] >= 0.99);
        CHECK(hot[c] <= 1.0);
    }
    const Vec3 warm = pbr_neutral_tonemap({2, 1, 0.3});
    CHECK(glint::test::near(warm, {0.96, 0.5340905058, 0.2359538598}, 1e-9));
}

TEST_CASE("tone map agrees with an independent transcription") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 10'000; ++i) {
        const double scale = std::pow(10.0, 4 * u(rng) - 2);
        const Vec3 c{scale * u(rng), scale * u(rng), scale * u(rng)};
        CHECK(glint::test::near(pbr_neutral_tonemap(c), reference_tonemap(c), 1e-12));
    }
}

TEST_CASE("tone map is monotone along grey and stays in range") {
    double previous = -1;
    for (int i = 0; i <= 200'000; ++i) {
        const double x = i * 1e-4 + (i > 100'000 ? (i - 100'000) * 1e-2 : 0);
        const double y = pbr_neutral_tonemap(Vec3{x}).x;
        CHECK(y >= previous);
        previous = y;
    }
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 100'000; ++i) {
        const double scale = std::pow(10.0, 8 * u(rng) - 4);
        const Vec3 out = pbr_neutral_tonemap({scale * u(rng), scale * u(rng), scale * u(rng)});
        REQUIRE(min_component(out) >= 0);
        REQUIRE(max_component(out) <= 1);
    }
}

TEST_CASE("tone map is continuous, including at both knees") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0, 1);
    double worst = 0;
    for (int i = 0; i < 100'000; ++i) {
        Vec3 c;
        switch (i % 4) {
            case 0:  // around the black knee on the min component
                c = {0.08 + 2e-6 * (u(rng) - 0.5), 0.08 + u(rng), 0.08 + u(rng)};
                break;
            case 1:  // around the compression knee on the max component
                c = {0.76 + 0.04 + 2e-6 * (u(rng) - 0.5), 0.1 + 0.6 * u(rng), 0.1 + 0.6 * u(rng)};
                break;
            case 2:
                c = {u(rng), u(rng), u(rng)};
                break;
            default:
                c = {20 * u(rng), 20 * u(rng), 20 * u(rng)};
        }
        const Vec3 a = pbr_neutral_tonemap(c);
        for (int k = 0; k < 3; ++k) {
            Vec3 d = c;
            d[k] += 1e-6;
            const Vec3 b = pbr_neutral_tonemap(d);
            worst = std::max(worst, max_component(Vec3{std::abs(a.x - b.x), std::abs(a.y - b.y),
                                                        std::abs(a.z - b.z)}));
        }
    }
    MESSAGE("largest step for a 1e-6 input change: " << worst);
    CHECK(worst < 1e-4);
}

TEST_CASE("tone map preserves hue below the compression knee") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0, 0.76);
    for (int i = 0; i < 10'000; ++i) {
        const Vec3 c{u(rng), u(rng), u(rng)};
        const Vec3 out = pbr_neutral_tonemap(c);
        const double x = min_component(c);
        const double offset = x < 0.08 ? x - 6.25 * x * x : 0.04;
        CHECK(out == c - Vec3{offset});
    }
}

TEST_CASE("sRGB transfer") {
    CHECK(linear_to_srgb(0.0) == 0.0);
    CHECK(linear_to_srgb(1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(linear_to_srgb(0.0031308) - 0.04045) <= 1e-6);
    CHECK(std::abs(linear_to_srgb(0.0031308 - 1e-12) - linear_to_srgb(0.0031308 + 1e-12)) <= 1e-6);
    for (int i = 0; i < 256; ++i) {
        const double v = i / 255.0;
        CHECK(std::abs(srgb_to_linear(linear_to_srgb(v)) - v) <= 1e-6);
        CHECK(std::abs(linear_to_srgb(srgb_to_linear(v)) - v) <= 1e-6);
    }
    CHECK(linear_to_srgb(Vec3{0, 1, 0.0031308}).z == linear_to_srgb(0.0031308));
}

TEST_CASE("display encoding order is tone map then sRGB") {
    ImageBuffer linear(2, 1);
    linear.pixels = {{0.5, 0.5, 0.5}, {5, 0.2, 0}};
    const ImageBuffer out = display_encode(linear);
    for (int i = 0; i < 2; ++i)
        CHECK(glint::test::near(out.pixels[i], linear_to_srgb(reference_tonemap(linear.pixels[i])), 1e-12));

    Accumulator acc(2, 1);
    acc.add(0, linear.pixels[0]);
    acc.add(1, linear.pixels[1]);
    CHECK(display_encode(acc).pixels == out.pixels);
}

TEST_CASE("PNG: 1x1 white") {
    ImageBuffer img(1, 1);
    img.pixels = {Vec3{1}};
    const auto path = temp_file("white.png");
    write_png(img, path);
    const auto png = glint::test::decode_png(path);
    CHECK(png.width == 1);
    CHECK(png.height == 1);
    CHECK(png.bytes == std::vector<std::uint8_t>{255, 255, 255});
}

TEST_CASE("PNG: 2x2 gradient") {
    ImageBuffer img(2, 2);
    img.pixels = {{0, 0, 0}, {1, 0, 0}, {0, 0.5, 1}, {0.25, 0.75, 0.2}};
    const auto path = temp_file("gradient.png");
    write_png(img, path);
    const auto png = glint::test::decode_png(path);
    CHECK(png.bytes == std::vector<std::uint8_t>{0, 0, 0, 255, 0, 0, 0, 128, 255, 64, 191, 51});
    CHECK(quantize_rgb8(img) == png.bytes);
}

TEST_CASE("PNG: 512x512 decodes with the right shape and bytes") {
    ImageBuffer img(512, 512);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0, 1);
    for (Vec3 &p : img.pixels) p = {u(rng), u(rng), u(rng)};
    const auto path = temp_file("large.png");
    write_png(img, path);
    const auto png = glint::test::decode_png(path);
    CHECK(png.width == 512);
    CHECK(png.height == 512);
    CHECK(png.channels == 3);
    CHECK(png.bit_depth == 8);
    CHECK(png.bytes == quantize_rgb8(img));
}

TEST_CASE("PNG: unwritable path names the path") {
    ImageBuffer img(1, 1);
    const std::filesystem::path bad = "/nonexistent_glint_dir/out.png";
    CHECK_THROWS_WITH_AS(write_png(img, bad), doctest::Contains(bad.string().c_str()), Error);
}

TEST_CASE("linear dump round trip") {
    Accumulator acc(3, 2);
    for (std::size_t i = 0; i < 6; ++i) acc.add(i, {i * 0.5, 1.0 / (i + 1), 3.0});
    const auto path = temp_file("dump.bin");
    write_linear_dump(acc, path);
    CHECK(std::filesystem::file_size(path) == 6 * 3 * 4);
    const auto floats = read_linear_dump(path);
    REQUIRE(floats.size() == 18);
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(floats[3 * i] == static_cast<float>(i * 0.5));
        CHECK(floats[3 * i + 1] == static_cast<float>(1.0 / (i + 1)));
        CHECK(floats[3 * i + 2] == 3.0f);
    }
}
