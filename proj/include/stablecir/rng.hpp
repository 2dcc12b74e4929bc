#pragma once

#include <cmath>
#include <cstdint>

namespace stablecir {

// xoshiro256** seeded via splitmix64. Hand-rolled so that streams are
// bit-identical across compilers (std:: distributions are implementation
// defined). Every stochastic operation takes an explicit seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& w : s_) w = splitmix64(x);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform on [0,1), 53-bit resolution
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform on (0,1]
    double uniform01_pos() { return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53; }

    double exponential() { return -std::log(uniform01_pos()); }

    // Box-Muller, one draw per call (two u64 consumed, no caching so the
    // stream position is a pure function of the draw count)
    double normal() {
        const double u1 = uniform01_pos();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    static std::uint64_t splitmix64(std::uint64_t& x) {
        std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[4];
};

// Order-independent stream derivation for parallel replications:
// seed(base, i, j) mixes the indices through splitmix64 twice.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t i, std::uint64_t j = 0) {
    std::uint64_t x = base;
    std::uint64_t h = Rng::splitmix64(x);
    x = h ^ (0x9e3779b97f4a7c15ULL + i);
    h = Rng::splitmix64(x);
    x = h ^ (0xc2b2ae3d27d4eb4fULL + j);
    return Rng::splitmix64(x);
}

} // namespace stablecir
