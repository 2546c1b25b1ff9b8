#pragma once

#include <cstdint>

namespace cspsim {

/// Deterministic, platform-independent generator used everywhere randomness is
/// needed (network delays, drop decisions, scenario generation). xoshiro256**
/// seeded through splitmix64; the recurrences are documented in
/// docs/formats.md so traces can be reproduced by other implementations.
///
/// splitmix64:  z = (x += 0x9E3779B97F4A7C15);
///              z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9;
///              z = (z ^ (z >> 27)) * 0x94D049BB133111EB;
///              return z ^ (z >> 31);
/// xoshiro256**: result = rotl(s1 * 5, 7) * 9, then the xor/shift state step.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& word : s_) word = splitmix64(x);
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

    /// Uniform draw in [0, n) via Lemire's multiply-shift reduction (debiased).
    std::uint64_t bounded(std::uint64_t n) {
        if (n == 0) return 0;
        std::uint64_t x = next_u64();
        __uint128_t m = static_cast<__uint128_t>(x) * static_cast<__uint128_t>(n);
        std::uint64_t l = static_cast<std::uint64_t>(m);
        if (l < n) {
            const std::uint64_t t = (0 - n) % n;
            while (l < t) {
                x = next_u64();
                m = static_cast<__uint128_t>(x) * static_cast<__uint128_t>(n);
                l = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    /// Bernoulli draw with exact rational probability num/den.
    bool chance(std::uint64_t num, std::uint64_t den) {
        if (num == 0) return false;
        return bounded(den) < num;
    }

    /// Derive an independent stream (e.g. per subsystem) without perturbing
    /// this generator's sequence.
    static Rng derive(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t x = seed;
        std::uint64_t a = splitmix64(x);
        x = seed ^ (0x9E3779B97F4A7C15ULL * (stream + 1));
        std::uint64_t b = splitmix64(x);
        return Rng(a ^ rotl(b, 32));
    }

    static std::uint64_t splitmix64(std::uint64_t& x) {
        std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

  private:
    static std::uint64_t rotl(std::uint64_t v, int k) {
        return (v << k) | (v >> (64 - k));
    }

    std::uint64_t s_[4];
};

} // namespace cspsim
