#pragma once

#include <cstdint>
#include <random>

namespace seqimit {

/// What a random stream is used for; part of the stream key so that two
/// consumers sharing a seed never see correlated draws.
enum class StreamPurpose : std::uint64_t {
    RandomScm = 1,
    Sampling = 2,
    RandomGraph = 3,
    Witness = 4,
};

/// Independent, reproducible generator for (seed, purpose, index).
std::mt19937_64 make_stream(std::uint64_t seed, StreamPurpose purpose, std::uint64_t index);

/// Uniform double in [0, 1) built from the top 53 bits, identical on every platform.
inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace seqimit
