#include "analysis.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace toesplit {

namespace {

void check_domain(double n, int d)
{
    if (d < 1)
        throw std::domain_error("complexity model requires d >= 1");
    if (n < 1.0)
        throw std::domain_error("complexity model requires n >= 1");
}

} // namespace

double complexity_embed(double n, int d)
{
    check_domain(n, d);
    const double s = std::pow(n, d);
    const double p = std::pow(2.0, d);
    return 2.0 * p * s * std::log2(p * s) + p * s;
}

double complexity_split(double n, int d)
{
    check_domain(n, d);
    const double s = std::pow(n, d);
    const double p = std::pow(2.0, d);
    return 2.0 * (p - 1.0) * s * (2.0 * std::log2(n) + 1.0) + p * s;
}

ComplexityReport ratios(double n, int d)
{
    if (n < 2.0)
        throw std::domain_error("ratio model requires n >= 2");
    check_domain(n, d);

    ComplexityReport r;
    r.d = d;
    r.n = n;
    r.s = std::pow(n, d);
    r.c_embed = complexity_embed(n, d);
    r.c_split = complexity_split(n, d);
    const double p = std::pow(2.0, d);
    r.r_c = (d * std::log2(2.0 * n) + 1.0) /
            ((1.0 - 1.0 / p) * (2.0 * std::log2(n) + 1.0) + 1.0);
    r.r_c_asymptote = d / (2.0 - std::pow(2.0, -d + 1));
    r.r_m = 2.0 / ((d + 1.0) / p + 1.0);
    r.r_m_sym = (p + 1.0) / (d + 2.0);
    return r;
}

ComplexityReport ratios_for_shape(const Shape& levels)
{
    if (levels.empty())
        throw std::domain_error("ratio model requires at least one level");
    double log_sum = 0.0;
    bool mixed = false;
    for (auto n : levels) {
        if (n < 2)
            throw std::domain_error("ratio model requires n >= 2");
        log_sum += std::log2(static_cast<double>(n));
        mixed = mixed || n != levels.front();
    }
    const int d = static_cast<int>(levels.size());
    const double geo = std::exp2(log_sum / d);
    ComplexityReport r = ratios(geo, d);
    r.s = static_cast<double>(shape_volume(levels));
    r.mixed_shape_approx = mixed;
    return r;
}

ReconcileRecord reconcile(const ComplexityReport& model, const RunMetrics& split,
                          const RunMetrics& embed, std::int64_t split_kernel_elems,
                          std::int64_t embed_kernel_elems)
{
    const auto s = static_cast<std::uint64_t>(std::llround(model.s));
    const std::uint64_t p = std::uint64_t{1} << model.d;

    // Leaf multiply counts pin the instance size; a mismatch means the two
    // runs (or the model) describe different instances.
    if (split.diag_mults != p * s || embed.diag_mults != p * s)
        throw std::invalid_argument("reconcile: run metrics do not match the model instance");

    ReconcileRecord rec;
    rec.model = model;
    rec.split_leaf_mults = split.diag_mults;
    rec.split_phase_mults = split.phase_mults;
    rec.embed_mults = embed.diag_mults;

    const double split_total_mults = static_cast<double>(split.diag_mults + split.phase_mults);
    rec.measured_mult_ratio = static_cast<double>(embed.diag_mults + embed.phase_mults) / split_total_mults;
    rec.measured_fft_call_ratio = static_cast<double>(embed.fft_forward + embed.fft_inverse) /
                                  static_cast<double>(split.fft_forward + split.fft_inverse);
    rec.measured_peak_ratio =
        static_cast<double>(embed.peak_live_elems + embed_kernel_elems) /
        static_cast<double>(split.peak_live_elems + split_kernel_elems);

    rec.split_leaf_mults_exact = split.diag_mults == p * s;
    rec.split_phase_mults_exact = split.phase_mults == 2 * (p - 1) * s;
    rec.embed_mults_exact = embed.diag_mults == p * s;
    const std::uint64_t expect_fft = 2 * p - 2;
    rec.split_fft_calls_exact = split.fft_forward == expect_fft && split.fft_inverse == expect_fft;
    return rec;
}

double round2(double v)
{
    return std::round(v * 100.0) / 100.0;
}

std::string format2(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", round2(v));
    return buf;
}

} // namespace toesplit
