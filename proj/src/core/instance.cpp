#include "instance.hpp"

#include <cmath>
#include <numbers>

namespace toesplit {

SplitMix64 seeded_stream(std::uint64_t seed, std::uint64_t role)
{
    return SplitMix64(seed ^ ((role + 1) * 0x9E3779B97F4A7C15ull));
}

GaussianStream::GaussianStream(SplitMix64 rng, double variance) : rng_(rng), sigma_(std::sqrt(variance))
{
    // variance 0 is the degenerate all-zero instance
    if (!(variance >= 0.0))
        throw std::invalid_argument("variance must be >= 0");
}

double GaussianStream::next()
{
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // Box-Muller on (0,1] x [0,1).
    const double u1 = 1.0 - rng_.next_unit();
    const double u2 = rng_.next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = sigma_ * r * std::sin(a);
    has_spare_ = true;
    return sigma_ * r * std::cos(a);
}

namespace {

// Project the lag tensor onto the per-level symmetry class: the group
// average over all single-level lag negations, with the sign character in
// skew mode. Each orbit's value is computed once (canonical member: all lags
// >= 0) and written to every member with the exact +-1 sign, so validation
// can use exact equality.
void symmetrize_lags(ComplexTensor& lags, const Shape& levels, Symmetry symmetry)
{
    const int d = static_cast<int>(levels.size());
    const std::uint32_t patterns = 1u << d;
    const bool skew = symmetry == Symmetry::skew;
    const double weight = 1.0 / static_cast<double>(patterns);

    std::vector<std::int64_t> idx(static_cast<std::size_t>(d), 0);
    const std::int64_t total = lags.size();
    for (std::int64_t off = 0; off < total; ++off) {
        bool canonical = true;
        for (int a = 0; a < d && canonical; ++a)
            canonical = idx[static_cast<std::size_t>(a)] >= levels[static_cast<std::size_t>(a)] - 1;
        if (canonical) {
            // A skew orbit with any zero lag component is its own sign-flip
            // partner and must vanish exactly (rounding in the group sum
            // would break exact validation).
            bool zero_lag = false;
            for (int a = 0; a < d && !zero_lag; ++a)
                zero_lag = idx[static_cast<std::size_t>(a)] == levels[static_cast<std::size_t>(a)] - 1;

            cplx acc{0.0, 0.0};
            if (!(skew && zero_lag))
                for (std::uint32_t sig = 0; sig < patterns; ++sig) {
                    std::int64_t src = 0;
                    double chi = 1.0;
                    for (int a = 0; a < d; ++a) {
                        const std::int64_t len = 2 * levels[static_cast<std::size_t>(a)] - 1;
                        std::int64_t k = idx[static_cast<std::size_t>(a)];
                        if ((sig >> a) & 1u) {
                            k = len - 1 - k;
                            if (skew)
                                chi = -chi;
                        }
                        src = src * len + k;
                    }
                    acc += chi * weight * lags[src];
                }
            for (std::uint32_t sig = 0; sig < patterns; ++sig) {
                std::int64_t dst = 0;
                double chi = 1.0;
                for (int a = 0; a < d; ++a) {
                    const std::int64_t len = 2 * levels[static_cast<std::size_t>(a)] - 1;
                    std::int64_t k = idx[static_cast<std::size_t>(a)];
                    if ((sig >> a) & 1u) {
                        k = len - 1 - k;
                        if (skew)
                            chi = -chi;
                    }
                    dst = dst * len + k;
                }
                lags[dst] = chi * acc;
            }
        }
        for (int a = d - 1; a >= 0; --a) {
            if (++idx[static_cast<std::size_t>(a)] < 2 * levels[static_cast<std::size_t>(a)] - 1)
                break;
            idx[static_cast<std::size_t>(a)] = 0;
        }
    }
}

} // namespace

GeneratorSpec random_generator(const Shape& levels, std::uint64_t seed, double variance,
                               Symmetry symmetry)
{
    Shape lag_shape;
    for (auto n : levels)
        lag_shape.push_back(2 * n - 1);

    ComplexTensor lags(lag_shape);
    GaussianStream gauss(seeded_stream(seed, 0), variance);
    for (auto& v : lags.values())
        v = gauss.next_complex();

    if (symmetry != Symmetry::general)
        symmetrize_lags(lags, levels, symmetry);
    return GeneratorSpec(levels, std::move(lags), symmetry);
}

ComplexTensor random_vector(const Shape& levels, std::uint64_t seed, double variance)
{
    ComplexTensor v(levels);
    GaussianStream gauss(seeded_stream(seed, 1), variance);
    for (auto& x : v.values())
        x = gauss.next_complex();
    return v;
}

} // namespace toesplit
