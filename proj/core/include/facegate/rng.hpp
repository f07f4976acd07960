#pragma once

#include <cstdint>
#include <vector>

namespace facegate {

// Seed value threaded through every stochastic component. Identical seed means
// identical tree sampling, grid-search draws and data splits.
struct RngSeed {
    std::uint64_t seed = 0;
};

// Deterministic xoshiro256** generator with splittable substreams.
//
// split(k) derives an independent stream from the *construction* seed, not
// from the current draw position, so parallel consumers (one tree, one CV
// fold, one sweep point) get the same stream regardless of scheduling.
class Rng {
public:
    explicit Rng(std::uint64_t seed);
    explicit Rng(RngSeed seed) : Rng(seed.seed) {}

    std::uint64_t next_u64();

    // Uniform in [0, 1), 53-bit resolution.
    double next_double();

    // Uniform in (0, 1]; never returns 0 (safe under log()).
    double next_double_open();

    // Unbiased uniform integer in [0, n). n must be > 0.
    std::uint64_t next_below(std::uint64_t n);

    // Standard normal via Box-Muller (second value cached).
    double next_normal();

    // Fisher-Yates.
    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(next_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // Sample k distinct values from [0, n), returned in ascending order.
    std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

    Rng split(std::uint64_t stream) const;

    std::uint64_t construction_seed() const { return seed_; }

private:
    std::uint64_t seed_;
    std::uint64_t s_[4];
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

}  // namespace facegate
