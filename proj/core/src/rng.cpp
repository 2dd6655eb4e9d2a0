#include "seqimit/rng.hpp"

namespace seqimit {

namespace {
std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
}  // namespace

std::mt19937_64 make_stream(std::uint64_t seed, StreamPurpose purpose, std::uint64_t index) {
    std::uint64_t state = seed;
    std::uint64_t a = splitmix64(state);
    state ^= static_cast<std::uint64_t>(purpose) * 0xd1b54a32d192ed03ULL;
    std::uint64_t b = splitmix64(state);
    state ^= index * 0x8cb92ba72f3d8dd7ULL;
    std::uint64_t c = splitmix64(state);
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                      static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
    return std::mt19937_64(seq);
}

}  // namespace seqimit
