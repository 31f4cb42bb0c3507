#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

namespace oclab {

// Deterministic PRNG (xoshiro256++ seeded through splitmix64).
//
// The standard library engines are portable but the distributions are not,
// so all draws (uniform, gaussian, shuffles) are implemented here to keep
// outputs bit-identical across platforms and toolchains.
class Rng {
  public:
    explicit Rng(uint64_t seed);

    uint64_t next_u64();

    // Uniform in [0, 1), 53-bit resolution.
    double next_double();

    // Unbiased uniform integer in [0, n). n must be > 0.
    uint64_t below(uint64_t n);

    // Standard normal via Box-Muller; second value of each pair is cached.
    double next_gauss();

    // Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        if (v.size() < 2) return;
        for (size_t i = v.size() - 1; i > 0; --i) {
            size_t j = static_cast<size_t>(below(i + 1));
            std::swap(v[i], v[j]);
        }
    }

    // Independent stream keyed by (master seed, tag, counter). Used to give
    // every generation site its own stream so call order never matters.
    static Rng derive(uint64_t master, std::string_view tag, uint64_t counter = 0);

  private:
    std::array<uint64_t, 4> state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Stable 64-bit content hash (FNV-1a). Not cryptographic; used for manifest
// dataset fingerprints and trajectory comparisons.
uint64_t fnv1a64(const void* data, size_t len, uint64_t seed = 0xcbf29ce484222325ULL);
uint64_t fnv1a64(std::string_view s, uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace oclab
