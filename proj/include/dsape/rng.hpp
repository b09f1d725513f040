#pragma once

#include <cmath>
#include <cstdint>

namespace dsape {

/// Philox 4x32-10 counter-based generator. Stateless per draw: the value at
/// (seed, counter) never depends on call order, so simulations are bit
/// reproducible across platforms and thread schedules.
class Philox {
public:
    explicit Philox(std::uint64_t seed) : key0_(static_cast<std::uint32_t>(seed)),
                                          key1_(static_cast<std::uint32_t>(seed >> 32)) {}

    std::uint32_t at(std::uint64_t counter) const {
        std::uint32_t c0 = static_cast<std::uint32_t>(counter);
        std::uint32_t c1 = static_cast<std::uint32_t>(counter >> 32);
        std::uint32_t c2 = 0xdeadbeefU, c3 = 0xcafef00dU;
        std::uint32_t k0 = key0_, k1 = key1_;
        for (int round = 0; round < 10; ++round) {
            std::uint64_t p0 = 0xD2511F53ULL * c0;
            std::uint64_t p1 = 0xCD9E8D57ULL * c2;
            std::uint32_t h0 = static_cast<std::uint32_t>(p0 >> 32), l0 = static_cast<std::uint32_t>(p0);
            std::uint32_t h1 = static_cast<std::uint32_t>(p1 >> 32), l1 = static_cast<std::uint32_t>(p1);
            std::uint32_t n0 = h1 ^ c1 ^ k0;
            std::uint32_t n1 = l1;
            std::uint32_t n2 = h0 ^ c3 ^ k1;
            std::uint32_t n3 = l0;
            c0 = n0; c1 = n1; c2 = n2; c3 = n3;
            k0 += 0x9E3779B9U;
            k1 += 0xBB67AE85U;
        }
        return c0;
    }

    /// Uniform in (0,1): never returns exactly 0 or 1.
    double uniform(std::uint64_t counter) const {
        return (static_cast<double>(at(counter)) + 0.5) / 4294967296.0;
    }

    /// Standard normal via Box-Muller on two counter slots (2*i, 2*i+1).
    double normal(std::uint64_t index) const {
        double u1 = uniform(2 * index);
        double u2 = uniform(2 * index + 1);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

private:
    std::uint32_t key0_, key1_;
};

/// Deterministic sub-stream derivation so one --seed fans out to
/// independent per-component streams.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace dsape
