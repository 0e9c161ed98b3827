#include "cupcast/rng.hpp"

namespace cupcast {

namespace {

// splitmix64 finalizer; bijective, so distinct inputs give distinct seeds.
std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

}  // namespace

RngStream::RngStream(std::uint64_t seed) : gen_(mix(seed + kGamma)) {}

RngStream RngStream::for_run(std::uint64_t master_seed, std::uint64_t run_index) {
    return RngStream(mix(master_seed) + kGamma * (run_index + 1));
}

std::uint64_t RngStream::next_u64() { return gen_(); }

double RngStream::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

}  // namespace cupcast
