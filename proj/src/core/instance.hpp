#pragma once

#include <cstdint>

#include "generator.hpp"

namespace toesplit {

/// SplitMix64. Fixed, portable stream: instances generated from a seed are
/// identical across platforms and builds.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next()
    {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1), 53-bit resolution.
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

/// Stream-splitting rule: role r draws from SplitMix64 seeded with
/// seed ^ ((r + 1) * 0x9E3779B97F4A7C15). Role 0 is the generator lags,
/// role 1 the input vector.
SplitMix64 seeded_stream(std::uint64_t seed, std::uint64_t role);

/// Independent zero-mean Gaussians via Box-Muller, sigma^2 = variance.
class GaussianStream {
  public:
    GaussianStream(SplitMix64 rng, double variance);

    double next();
    cplx next_complex() { const double re = next(); return {re, next()}; }

  private:
    SplitMix64 rng_;
    double sigma_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Seeded random generator spec: lag coefficients with independent real and
/// imaginary parts, mean 0, the given variance. symmetric/skew modes project
/// the drawn lags onto the symmetry class (per-level group average) before
/// construction, so the result always passes validation.
GeneratorSpec random_generator(const Shape& levels, std::uint64_t seed, double variance,
                               Symmetry symmetry);

ComplexTensor random_vector(const Shape& levels, std::uint64_t seed, double variance);

} // namespace toesplit
