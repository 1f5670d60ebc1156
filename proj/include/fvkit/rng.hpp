// Deterministic random number generation for experiments: splitmix64 stream
// derivation, xoshiro256** core, unbiased bounded sampling, Gaussian variates
// and Floyd k-subset sampling. Not cryptographic; the bijection derivation in
// vault.hpp uses a keyed stream cipher instead.
#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace fv {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Mixes an arbitrary number of labels into a single substream seed.
inline std::uint64_t mix_seed(std::uint64_t seed) { return seed; }

template <typename... Rest>
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t label, Rest... rest) {
    std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL + (label << 1));
    std::uint64_t mixed = splitmix64(s);
    return mix_seed(mixed, rest...);
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64(sm);
    }

    Rng(std::uint64_t seed, std::uint64_t stream) : Rng(mix_seed(seed, stream)) {}

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    std::uint32_t next_u32() { return static_cast<std::uint32_t>(next_u64() >> 32); }

    // Uniform in [0, bound), bound >= 1. Rejection sampling, no modulo bias.
    std::uint32_t below(std::uint32_t bound) {
        const std::uint64_t span = (std::uint64_t{1} << 32) / bound * bound;
        std::uint32_t r;
        do {
            r = next_u32();
        } while (r >= span);
        return r % bound;
    }

    // Uniform in [0, 1) with 53-bit resolution.
    double unit_real() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Standard normal variate (Box-Muller).
    double gaussian() {
        double u1;
        do {
            u1 = unit_real();
        } while (u1 <= 0.0);
        const double u2 = unit_real();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    bool coin() { return (next_u64() >> 63) != 0; }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t state_[4];
};

// Floyd's algorithm: uniform k-subset of {0, ..., n-1}, returned unsorted.
// Rejection-free: draws exactly k bounded variates.
inline std::vector<std::uint32_t> sample_subset(Rng& rng, std::uint32_t n, std::uint32_t k) {
    std::vector<std::uint32_t> chosen;
    chosen.reserve(k);
    for (std::uint32_t j = n - k; j < n; ++j) {
        const std::uint32_t t = rng.below(j + 1);
        bool seen = false;
        for (std::uint32_t c : chosen) {
            if (c == t) {
                seen = true;
                break;
            }
        }
        chosen.push_back(seen ? j : t);
    }
    return chosen;
}

}  // namespace fv
