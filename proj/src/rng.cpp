#include "forge/rng.hpp"

#include <cmath>

#include "forge/common.hpp"

namespace forge {

namespace {

uint64_t splitmix64(uint64_t& x) {
    x += 0x9E3779B97F4A7C15ull;
    uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Rng::Rng(uint64_t seed) {
    uint64_t x = seed;
    for (auto& s : s_) s = splitmix64(x);
}

uint64_t Rng::next_u64() {
    const uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

uint64_t Rng::bounded(uint64_t n) {
    if (n == 0) fail("Rng::bounded: n must be positive");
    const uint64_t threshold = (0ull - n) % n;
    for (;;) {
        uint64_t r = next_u64();
        if (r >= threshold) return r % n;
    }
}

int Rng::range(int lo, int hi) {
    return lo + static_cast<int>(bounded(static_cast<uint64_t>(hi - lo + 1)));
}

double Rng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::gauss() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = 0.0;
    do {
        u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

Rng derive_rng(uint64_t seed, uint64_t index, RngPurpose purpose) {
    uint64_t x = seed;
    uint64_t a = splitmix64(x);
    x = a ^ (index * 0xD1B54A32D192ED03ull + 0x9E3779B97F4A7C15ull);
    uint64_t b = splitmix64(x);
    x = b ^ (static_cast<uint64_t>(purpose) * 0x8CB92BA72F3D8DD7ull);
    return Rng(splitmix64(x));
}

std::string rng_path(uint64_t seed, uint64_t index, RngPurpose purpose) {
    return "seed=" + std::to_string(seed) + "/i=" + std::to_string(index) +
           "/p=" + std::to_string(static_cast<uint64_t>(purpose));
}

}  // namespace forge
