// Copyright 2026 The Glint Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <utility>

namespace glint {

// PCG32, XSH-RR 64/32 output.
struct PcgState {
    std::uint64_t state = 0;
    std::uint64_t increment = 1;  // always odd

    friend constexpr bool operator==(const PcgState &, const PcgState &) = default;
};

inline constexpr std::uint64_t kPcgMultiplier = 6364136223846793005ULL;

constexpr std::pair<std::uint32_t, PcgState> pcg_next_u32(PcgState s) {
    const std::uint64_t old = s.state;
    s.state = old * kPcgMultiplier + s.increment;
    const auto xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
    const auto rot = static_cast<std::uint32_t>(old >> 59u);
    const std::uint32_t out = (xorshifted >> rot) | (xorshifted << ((0u - rot) & 31u));
    return {out, s};
}

constexpr double u32_to_unit(std::uint32_t v) { return v * 0x1p-32; }

constexpr std::pair<double, PcgState> next_unit_real(PcgState s) {
    const auto [bits, next] = pcg_next_u32(s);
    return {u32_to_unit(bits), next};
}

// Seeding from the reference implementation (pcg32_srandom_r).
constexpr PcgState pcg_seed(std::uint64_t init_state, std::uint64_t init_seq) {
    PcgState s{0, (init_seq << 1u) | 1u};
    s = pcg_next_u32(s).second;
    s.state += init_state;
    return pcg_next_u32(s).second;
}

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30u)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27u)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31u);
}

// One stream per (pixel, sample): the sample picks the starting state, the
// pixel picks the increment.
constexpr PcgState seed_stream(std::uint64_t pixel_index, std::uint64_t sample_index,
                               std::uint64_t global_seed) {
    const std::uint64_t state = splitmix64(global_seed ^ splitmix64(sample_index));
    const std::uint64_t increment = (splitmix64(pixel_index) << 1u) | 1u;
    return pcg_next_u32(PcgState{state, increment}).second;
}

// Locally owned stream for code that draws many values in sequence.
class PcgStream {
  public:
    constexpr explicit PcgStream(PcgState s) : state_(s) {}

    constexpr std::uint32_t next_u32() {
        auto [v, s] = pcg_next_u32(state_);
        state_ = s;
        return v;
    }
    constexpr double next_real() { return u32_to_unit(next_u32()); }
    constexpr const PcgState &state() const { return state_; }

  private:
    PcgState state_;
};

}  // namespace glint
