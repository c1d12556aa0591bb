#ifndef IMPUTEKIT_RNG_HPP
#define IMPUTEKIT_RNG_HPP

#include <cstdint>
#include <string_view>

namespace imputekit {

// SplitMix64 finalizer. Bijective on 64-bit words, so distinct inputs never
// collide.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Counter-addressable uniform generator: draw i of stream `seed` is
// mix64(seed + i * gamma), the SplitMix64 sequence entered at offset i.
// Any cell of the stream can be evaluated independently, so parallel
// schedules cannot reorder draws.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t bits(std::uint64_t counter) const {
        return mix64(seed_ + (counter + 1) * 0x9e3779b97f4a7c15ULL);
    }

    // Uniform in [0, 1), 53-bit mantissa.
    double uniform(std::uint64_t counter) const {
        return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
    }

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
};

// Derives an independent stream for a named sub-purpose (holdout sampling,
// per-mechanism replicates, ...). FNV-1a over the tag keeps derivations
// stable across platforms.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view tag) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : tag) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return mix64(base ^ h);
}

}  // namespace imputekit

#endif  // IMPUTEKIT_RNG_HPP
