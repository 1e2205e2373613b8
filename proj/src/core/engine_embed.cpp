#include "engine_embed.hpp"

#include <chrono>
#include <cmath>
#include <string>

namespace toesplit {

namespace {

// Per-axis remap tables for a mirror-compressed full spectrum: the stored
// corner holds indices 0..n, and f_l = +-f_{2n-l} fills the rest.
void full_spectrum_tables(const Shape& levels, bool skew,
                          std::vector<std::vector<std::int64_t>>& src,
                          std::vector<std::vector<double>>& sign)
{
    const int d = static_cast<int>(levels.size());
    src.assign(static_cast<std::size_t>(d), {});
    sign.assign(static_cast<std::size_t>(d), {});
    for (int a = 0; a < d; ++a) {
        const std::int64_t n = levels[static_cast<std::size_t>(a)];
        auto& s = src[static_cast<std::size_t>(a)];
        auto& g = sign[static_cast<std::size_t>(a)];
        s.resize(static_cast<std::size_t>(2 * n));
        g.resize(static_cast<std::size_t>(2 * n));
        for (std::int64_t l = 0; l < 2 * n; ++l) {
            if (l <= n) {
                s[static_cast<std::size_t>(l)] = l;
                g[static_cast<std::size_t>(l)] = 1.0;
            } else {
                s[static_cast<std::size_t>(l)] = 2 * n - l;
                g[static_cast<std::size_t>(l)] = skew ? -1.0 : 1.0;
            }
        }
    }
}

void validate_full_spectrum_mirror(const ComplexTensor& spectrum, bool skew)
{
    const double tol = 1e-9 * std::max(max_abs(spectrum), 1.0);
    const double mirror_sign = skew ? -1.0 : 1.0;
    for (int a = 0; a < spectrum.dims(); ++a) {
        const std::int64_t len = spectrum.axis_length(a);
        const std::int64_t inner = spectrum.inner_count(a);
        const std::int64_t outer = spectrum.outer_count(a);
        for (std::int64_t o = 0; o < outer; ++o)
            for (std::int64_t l = 0; l < len; ++l) {
                const std::int64_t ml = (len - l) % len;
                const cplx* lhs = spectrum.data() + (o * len + l) * inner;
                const cplx* rhs = spectrum.data() + (o * len + ml) * inner;
                for (std::int64_t i = 0; i < inner; ++i)
                    if (std::abs(lhs[i] - mirror_sign * rhs[i]) > tol)
                        throw SymmetryError("embedded spectrum is not mirror " +
                                            std::string(skew ? "antisymmetric" : "symmetric"));
            }
    }
}

} // namespace

EmbedOperator::EmbedOperator(const GeneratorSpec& g, cplx s0, std::optional<SpectraStorage> storage)
    : levels_(g.levels()), symmetry_(g.symmetry()), storage_(SpectraStorage::full)
{
    const auto t0 = std::chrono::steady_clock::now();
    for (auto n : levels_)
        padded_shape_.push_back(2 * n);

    bool compress = false;
    if (storage.has_value())
        compress = *storage == SpectraStorage::mirror_compressed;
    else
        compress = symmetry_ == Symmetry::symmetric || (symmetry_ == Symmetry::skew && s0 == cplx{});
    if (compress && symmetry_ == Symmetry::general)
        throw SymmetryError("compression requires a symmetric or skew generator");

    try {
        EmbeddedGenerator embedded = embed_generator(g, s0);
        ComplexTensor spectrum = std::move(embedded.data);
        fft_all_axes_inplace(spectrum);

        if (compress) {
            validate_full_spectrum_mirror(spectrum, symmetry_ == Symmetry::skew);
            Shape corner;
            for (auto n : levels_)
                corner.push_back(n + 1);
            ComplexTensor stored(corner);
            std::vector<std::int64_t> idx(corner.size(), 0);
            for (std::int64_t off = 0; off < stored.size(); ++off) {
                std::int64_t s = 0;
                for (int a = 0; a < stored.dims(); ++a)
                    s = s * padded_shape_[static_cast<std::size_t>(a)] + idx[static_cast<std::size_t>(a)];
                stored[off] = spectrum[s];
                for (int a = stored.dims() - 1; a >= 0; --a) {
                    if (++idx[static_cast<std::size_t>(a)] < corner[static_cast<std::size_t>(a)])
                        break;
                    idx[static_cast<std::size_t>(a)] = 0;
                }
            }
            symbol_ = std::move(stored);
            storage_ = SpectraStorage::mirror_compressed;
        } else {
            symbol_ = std::move(spectrum);
        }
    } catch (const std::bad_alloc&) {
        throw ResourceError("out of memory while precomputing embedded spectrum");
    }

    const auto t1 = std::chrono::steady_clock::now();
    precompute_ns_ =
        static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
}

ComplexTensor EmbedOperator::apply(const ComplexTensor& v, RunMetrics* metrics) const
{
    if (v.shape() != levels_)
        throw ShapeError("input vector shape does not match the operator's levels");

    AllocationMeter meter;
    RunMetrics local;
    const auto t0 = std::chrono::steady_clock::now();

    ComplexTensor work = [&] {
        try {
            return ComplexTensor(padded_shape_, &meter);
        } catch (const std::bad_alloc&) {
            throw ResourceError("out of memory while embedding input vector");
        }
    }();
    embed_corner(v, work);

    for (int a = 0; a < work.dims(); ++a) {
        fft_axis_inplace(work, a);
        ++local.fft_forward;
    }

    if (storage_ == SpectraStorage::full) {
        cplx* p = work.data();
        const cplx* q = symbol_.data();
        const std::int64_t n = work.size();
        for (std::int64_t i = 0; i < n; ++i)
            p[i] *= q[i];
    } else {
        std::vector<std::vector<std::int64_t>> src;
        std::vector<std::vector<double>> sign;
        full_spectrum_tables(levels_, symmetry_ == Symmetry::skew, src, sign);
        multiply_remapped(work, symbol_, src, sign);
    }
    local.diag_mults += static_cast<std::uint64_t>(work.size());

    for (int a = 0; a < work.dims(); ++a) {
        ifft_axis_inplace(work, a);
        ++local.fft_inverse;
    }

    // Eager projection: compact the leading corner in place, dropping the
    // obviated padding lanes from the live count.
    work.shrink_to_corner(levels_);
    const auto t1 = std::chrono::steady_clock::now();

    if (metrics) {
        *metrics = local;
        metrics->peak_live_elems = meter.peak();
        metrics->apply_ns =
            static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
    }
    work.detach_meter();
    return work;
}

std::pair<ComplexTensor, RunMetrics> toe_mul_embed(const GeneratorSpec& g, const ComplexTensor& v)
{
    EmbedOperator op(g);
    RunMetrics metrics;
    ComplexTensor y = op.apply(v, &metrics);
    return {std::move(y), metrics};
}

namespace {

void check_cap(const GeneratorSpec& g, std::int64_t cap)
{
    const std::int64_t s = g.vector_size();
    if (s > cap)
        throw CapExceededError("dense oracle cap exceeded: s = " + std::to_string(s) +
                               " > cap = " + std::to_string(cap));
}

} // namespace

ComplexTensor naive_matvec(const GeneratorSpec& g, const ComplexTensor& v, std::int64_t cap)
{
    if (v.shape() != g.levels())
        throw ShapeError("input vector shape does not match the generator's levels");
    check_cap(g, cap);

    const int d = g.dims();
    const std::int64_t s = g.vector_size();
    const ComplexTensor& lags = g.lags();

    ComplexTensor y(g.levels());
    std::vector<std::int64_t> jdx(static_cast<std::size_t>(d), 0);
    for (std::int64_t j = 0; j < s; ++j) {
        cplx acc{0.0, 0.0};
        std::vector<std::int64_t> kdx(static_cast<std::size_t>(d), 0);
        for (std::int64_t k = 0; k < s; ++k) {
            std::int64_t lag_off = 0;
            for (int a = 0; a < d; ++a) {
                const std::int64_t n = g.levels()[static_cast<std::size_t>(a)];
                const std::int64_t m = jdx[static_cast<std::size_t>(a)] - kdx[static_cast<std::size_t>(a)];
                lag_off = lag_off * (2 * n - 1) + (m + n - 1);
            }
            acc += lags[lag_off] * v[k];
            for (int a = d - 1; a >= 0; --a) {
                if (++kdx[static_cast<std::size_t>(a)] < g.levels()[static_cast<std::size_t>(a)])
                    break;
                kdx[static_cast<std::size_t>(a)] = 0;
            }
        }
        y[j] = acc;
        for (int a = d - 1; a >= 0; --a) {
            if (++jdx[static_cast<std::size_t>(a)] < g.levels()[static_cast<std::size_t>(a)])
                break;
            jdx[static_cast<std::size_t>(a)] = 0;
        }
    }
    return y;
}

std::vector<cplx> dense_toeplitz_matrix(const GeneratorSpec& g, std::int64_t cap)
{
    check_cap(g, cap);
    const int d = g.dims();
    const std::int64_t s = g.vector_size();
    const ComplexTensor& lags = g.lags();

    std::vector<cplx> mat(static_cast<std::size_t>(s * s));
    std::vector<std::int64_t> jdx(static_cast<std::size_t>(d), 0);
    for (std::int64_t j = 0; j < s; ++j) {
        std::vector<std::int64_t> kdx(static_cast<std::size_t>(d), 0);
        for (std::int64_t k = 0; k < s; ++k) {
            std::int64_t lag_off = 0;
            for (int a = 0; a < d; ++a) {
                const std::int64_t n = g.levels()[static_cast<std::size_t>(a)];
                const std::int64_t m = jdx[static_cast<std::size_t>(a)] - kdx[static_cast<std::size_t>(a)];
                lag_off = lag_off * (2 * n - 1) + (m + n - 1);
            }
            mat[static_cast<std::size_t>(j * s + k)] = lags[lag_off];
            for (int a = d - 1; a >= 0; --a) {
                if (++kdx[static_cast<std::size_t>(a)] < g.levels()[static_cast<std::size_t>(a)])
                    break;
                kdx[static_cast<std::size_t>(a)] = 0;
            }
        }
        for (int a = d - 1; a >= 0; --a) {
            if (++jdx[static_cast<std::size_t>(a)] < g.levels()[static_cast<std::size_t>(a)])
                break;
            jdx[static_cast<std::size_t>(a)] = 0;
        }
    }
    return mat;
}

} // namespace toesplit
