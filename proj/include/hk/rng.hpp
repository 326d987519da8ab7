#pragma once

#include <array>
#include <cstdint>

namespace hk::rng {

// Seed-mixing constants. These are part of the reproducibility contract:
// outputs produced with one release can be regenerated by any implementation
// that applies the same constants (documented in the README).
inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;   // splitmix64 increment
inline constexpr std::uint64_t kMixMul1 = 0xBF58476D1CE4E5B9ull;  // splitmix64 finalizer
inline constexpr std::uint64_t kMixMul2 = 0x94D049BB133111EBull;  // splitmix64 finalizer
inline constexpr std::uint64_t kCellGamma = 0xC2B2AE3D27D4EB4Full; // grid-cell stream

/// splitmix64 output finalizer (Vigna). Bijective 64-bit mix.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= kMixMul1;
    z ^= z >> 27;
    z *= kMixMul2;
    z ^= z >> 31;
    return z;
}

/// Deterministic per-trial seed: mix64(master ^ kGolden*(index+1)).
/// Stable across versions and worker counts.
constexpr std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial_index) {
    return mix64(master_seed ^ (kGolden * (trial_index + 1)));
}

/// Deterministic per-grid-cell master seed, keyed by (master, n, eps index).
/// Keying on the epsilon *index* means appending grid values never perturbs
/// existing cells.
constexpr std::uint64_t cell_seed(std::uint64_t master_seed, std::uint64_t n,
                                  std::uint64_t eps_index) {
    return mix64(mix64(master_seed ^ (kGolden * (n + 1))) ^ (kCellGamma * (eps_index + 1)));
}

/// xoshiro256++ (Blackman/Vigna), state seeded from a splitmix64 stream.
/// Used instead of std::mt19937 + distributions because libstdc++'s
/// distributions are implementation-defined; this generator yields identical
/// streams on every platform.
class Xoshiro256pp {
public:
    explicit Xoshiro256pp(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) {
            sm += kGolden;
            word = mix64(sm);
        }
    }

    std::uint64_t operator()() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform draw on [0,1) with 53 bits of precision.
    double uniform01() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_{};
};

inline constexpr const char* kGeneratorName =
    "xoshiro256++ seeded via splitmix64(seed + k*golden); trial seeds "
    "mix64(master ^ golden*(trial+1))";

} // namespace hk::rng
