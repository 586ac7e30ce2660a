#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace forge {

// Deterministic RNG used everywhere randomness is needed. Hand-rolled
// (xoshiro256** seeded by splitmix64) so outputs are identical across
// platforms and standard libraries; std::uniform_int_distribution is
// implementation-defined and unsuitable for byte-reproducible corpora.
class Rng {
public:
    Rng() : Rng(0) {}
    explicit Rng(uint64_t seed);

    uint64_t next_u64();

    // Uniform in [0, n) by rejection sampling; n > 0.
    uint64_t bounded(uint64_t n);

    // Uniform in [lo, hi] inclusive.
    int range(int lo, int hi);

    // Uniform double in [0, 1).
    double uniform();

    // Standard normal via Box-Muller (cached spare).
    double gauss();

    // In-place Fisher-Yates.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(bounded(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    uint64_t s_[4];
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// Stream purposes keep per-record randomness (shot sampling, delimiters,
// separators, shuffles) mutually independent and schedule-invariant: every
// stream is a pure function of (seed, index, purpose).
enum class RngPurpose : uint64_t {
    shuffle = 1,
    shots = 2,
    delimiter = 3,
    separator = 4,
    init = 5,
    epoch = 6,
    sampling = 7,
    eval_shots = 8,
    synth = 9,
};

Rng derive_rng(uint64_t seed, uint64_t index, RngPurpose purpose);

std::string rng_path(uint64_t seed, uint64_t index, RngPurpose purpose);

}  // namespace forge
