#include "oclab/rng.hpp"

#include <cmath>

#include "oclab/errors.hpp"

namespace oclab {

namespace {

uint64_t splitmix64(uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

uint64_t rotl(uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

}  // namespace

Rng::Rng(uint64_t seed) {
    uint64_t s = seed;
    for (auto& w : state_) w = splitmix64(s);
}

uint64_t Rng::next_u64() {
    uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double Rng::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

uint64_t Rng::below(uint64_t n) {
    if (n == 0) throw UsageError("Rng::below: n must be positive");
    // Rejection sampling over the largest multiple of n.
    uint64_t threshold = (0 - n) % n;
    for (;;) {
        uint64_t r = next_u64();
        if (r >= threshold) return r % n;
    }
}

double Rng::next_gauss() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // Box-Muller on (0,1] to avoid log(0).
    double u = 1.0 - next_double();
    double v = next_double();
    double r = std::sqrt(-2.0 * std::log(u));
    double theta = 2.0 * 3.141592653589793238462643383279502884 * v;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

Rng Rng::derive(uint64_t master, std::string_view tag, uint64_t counter) {
    uint64_t h = fnv1a64(tag, 0x9e3779b97f4a7c15ULL ^ master);
    uint64_t s = h;
    uint64_t mixed = splitmix64(s) ^ (counter * 0xd1b54a32d192ed03ULL + 0x2545f4914f6cdd1dULL);
    return Rng(mixed ^ master);
}

uint64_t fnv1a64(const void* data, size_t len, uint64_t seed) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    uint64_t h = seed;
    for (size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

uint64_t fnv1a64(std::string_view s, uint64_t seed) {
    return fnv1a64(s.data(), s.size(), seed);
}

}  // namespace oclab
