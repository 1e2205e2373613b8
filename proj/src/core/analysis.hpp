#pragma once

#include <cstdint>
#include <string>

#include "engine_split.hpp"
#include "tensor.hpp"

namespace toesplit {

/// Closed-form cost and memory model for uniform per-level size n and d
/// levels (s = n^d). r_c_asymptote = d / (2 - 2^{-d+1});
/// r_m = 2 / ((d+1) 2^{-d} + 1); r_m_sym = (2^d + 1) / (d + 2).
struct ComplexityReport {
    int d = 0;
    double n = 0.0;
    double s = 0.0;
    double c_embed = 0.0;
    double c_split = 0.0;
    double r_c = 0.0;
    double r_c_asymptote = 0.0;
    double r_m = 0.0;
    double r_m_sym = 0.0;
    bool mixed_shape_approx = false; // n is a geometric mean
};

/// 2^{d+1} s log2(2^d s) + 2^d s
double complexity_embed(double n, int d);
/// 2 (2^d - 1) s (2 log2(n) + 1) + 2^d s
double complexity_split(double n, int d);

ComplexityReport ratios(double n, int d);
/// Mixed shapes: substitutes the geometric-mean n (so s stays exact) and
/// flags the approximation.
ComplexityReport ratios_for_shape(const Shape& levels);

/// Model predictions against instrumented counts from one split run and one
/// embed run of the same instance.
struct ReconcileRecord {
    ComplexityReport model;
    std::uint64_t split_leaf_mults = 0;
    std::uint64_t split_phase_mults = 0;
    std::uint64_t embed_mults = 0;
    double measured_mult_ratio = 0.0;  // total elementwise multiplies, embed/split
    double measured_fft_call_ratio = 0.0;
    double measured_peak_ratio = 0.0;  // kernel-inclusive
    bool split_leaf_mults_exact = false;  // == 2^d s
    bool split_phase_mults_exact = false; // == 2 (2^d - 1) s
    bool embed_mults_exact = false;       // == 2^d s
    bool split_fft_calls_exact = false;   // forward == inverse == 2^{d+1} - 2
};

/// Throws std::invalid_argument when the metrics cannot belong to the
/// model's instance (leaf multiply counts pin s).
ReconcileRecord reconcile(const ComplexityReport& model, const RunMetrics& split,
                          const RunMetrics& embed, std::int64_t split_kernel_elems,
                          std::int64_t embed_kernel_elems);

/// Round half away from zero to two decimals (Table presentation; plain
/// printf would round 8.125 to 8.12 under round-half-even).
double round2(double v);
std::string format2(double v);

} // namespace toesplit
