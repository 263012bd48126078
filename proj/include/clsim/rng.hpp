#pragma once

#include <cstdint>

#include "clsim/field.hpp"

namespace clsim {

/// Counter-free splittable RNG. Stream i of seed s is an independent
/// splitmix64 sequence keyed by hashing (s, i), so per-sample determinism
/// survives any parallel partitioning of the samples.
class SplitStream {
public:
    SplitStream(std::uint64_t seed, std::uint64_t stream) : state_(key(seed, stream)) {}

    std::uint64_t next_u64() {
        // splitmix64 step (Steele/Lea/Flood)
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    /// Uniform in [0, 1), 53 bits.
    double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

private:
    static std::uint64_t key(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    std::uint64_t state_;
};

struct SamplingError : Error {
    using Error::Error;
};

/// Draw a position from a sampled density. 1D inverts the cell-mass CDF
/// (uniform within a cell); 2D uses rejection against max(rho) with bilinear
/// evaluation. Density need not be normalized. Throws SamplingError if rho
/// has no mass or rejection fails to accept.
std::array<double, 2> sample_density(const ScalarField& rho, SplitStream& rng);

/// Precomputed sampler for repeated draws from the same density.
class DensitySampler {
public:
    explicit DensitySampler(const ScalarField& rho);
    std::array<double, 2> operator()(SplitStream& rng) const;

private:
    const ScalarField& rho_;
    std::vector<double> cdf_;  // 1D only
    double total_ = 0.0;
    double max_ = 0.0;
};

}  // namespace clsim
