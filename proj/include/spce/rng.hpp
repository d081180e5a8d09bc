#pragma once

#include <cstdint>

namespace spce {

// Counter-based deterministic generator built on the splitmix64 finalizer.
// The k-th value of substream s under seed q is
//
//   mix(mix(q + s * 0xD1B54A32D192ED03) + (k + 1) * 0x9E3779B97F4A7C15)
//
// i.e. pure random access: no mutable state, any draw addressable by
// (seed, stream, index). Simulation code assigns one substream per purpose
// (pair gaps, hidden variables, per-side detection, per-side dark counts),
// with even stream ids feeding side A and odd ids side B, so a side's
// randomness is structurally independent of anything the other side does.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ULL;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t draw(std::uint64_t stream, std::uint64_t index) const {
        const std::uint64_t key = mix(seed_ + stream * 0xD1B54A32D192ED03ULL);
        return mix(key + (index + 1) * 0x9E3779B97F4A7C15ULL);
    }

    // Uniform double in (0, 1); never returns 0 so -log(u) is always finite.
    double uniform01(std::uint64_t stream, std::uint64_t index) const {
        const double u = static_cast<double>(draw(stream, index) >> 11) * 0x1.0p-53;
        return u > 0.0 ? u : 0x1.0p-53;
    }

    std::uint64_t seed() const noexcept { return seed_; }

private:
    std::uint64_t seed_;
};

}  // namespace spce
