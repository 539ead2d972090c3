// SPDX-License-Identifier: Apache-2.0
//
// Counter-based random streams: every (seed, stream index) pair names an
// independent SplitMix64 sequence, so work can be split across threads in any
// way without changing the numbers any one stream produces.
#pragma once

#include <cstdint>

namespace tfqkd {

/// SplitMix64 finalizer (Stafford variant 13).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class CounterRng {
public:
    using result_type = std::uint64_t;

    constexpr CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
        : state_(mix64(seed ^ 0x6A09E667F3BCC909ULL) ^ mix64(stream + 0x9E3779B97F4A7C15ULL))
    {
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }

    constexpr result_type operator()() noexcept
    {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix64(state_);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    constexpr double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n) by multiply-shift (bias below 2^-64 * n).
    constexpr std::uint64_t below(std::uint64_t n) noexcept
    {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>((*this)()) * n) >> 64);
    }

private:
    std::uint64_t state_;
};

}  // namespace tfqkd
