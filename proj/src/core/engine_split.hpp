#pragma once

#include <cstdint>
#include <optional>

#include "kernel.hpp"

namespace toesplit {

enum class ExecMode { lazy_sequential, eager_parallel };

/// lazy_sequential evaluates one branch at a time, depth first, holding one
/// live child per tree level ((d+1)s working peak). eager_parallel runs the
/// two children of a node as concurrent tasks while permits from the task
/// budget are available; the merge order is fixed either way, so both modes
/// produce bit-identical output.
struct ExecutionPolicy {
    ExecMode mode = ExecMode::lazy_sequential;
    int task_budget = 1; // max concurrent branch tasks (eager_parallel)
};

/// Per-matvec instrumentation. diag_mults counts elementwise multiplies with
/// Toeplitz spectral data, phase_mults the split/merge phase applications;
/// peak_live_elems is the working-vector peak (kernel storage excluded).
struct RunMetrics {
    std::uint64_t fft_forward = 0;
    std::uint64_t fft_inverse = 0;
    std::uint64_t diag_mults = 0;
    std::uint64_t phase_mults = 0;
    std::int64_t peak_live_elems = 0;
    std::uint64_t apply_ns = 0;
};

/// y = T v by branch recursion over the parity spectra: per level, an FFT,
/// an even child continuing in place and a phase-shifted odd child, diagonal
/// multiplication at the leaves, then merge y = (even + conj(P).odd)/2 and
/// inverse FFT on the way back up. Deterministic output under both policies.
ComplexTensor apply_split(const KernelSpectra& k, const ComplexTensor& v,
                          const ExecutionPolicy& policy = {}, RunMetrics* metrics = nullptr,
                          const FftProvider& provider = default_fft_provider());

std::pair<ComplexTensor, RunMetrics> toe_mul_split(const KernelSpectra& k, const ComplexTensor& v,
                                                   const ExecutionPolicy& policy = {});

/// Phase-shifted child copy for splitting the given (still spatial) axis;
/// the input is left untouched.
ComplexTensor spt_brn(const ComplexTensor& v, int axis, AllocationMeter* meter = nullptr,
                      RunMetrics* metrics = nullptr);

/// even = (even + conj(P).odd)/2 along `axis`, both children already
/// inverse-transformed along that axis.
void mrg_brn_inplace(ComplexTensor& even, const ComplexTensor& odd, int axis,
                     RunMetrics* metrics = nullptr);
ComplexTensor mrg_brn(const ComplexTensor& even, const ComplexTensor& odd, int axis);

/// Leaf diagonal multiplication with parity block b (compressed blocks are
/// expanded on the fly, no temporary).
void mul_brn_inplace(ComplexTensor& v, const KernelSpectra& k, BranchId b,
                     RunMetrics* metrics = nullptr);
ComplexTensor mul_brn(const ComplexTensor& v, const KernelSpectra& k, BranchId b);

/// Precomputed split-FFT operator: owns the parity spectra of one generator.
/// Reentrant; concurrent apply() calls share the immutable spectra.
class SplitOperator {
  public:
    /// storage: full, mirror_compressed, or nullopt for automatic
    /// (compressed whenever the generator's symmetry admits it).
    explicit SplitOperator(const GeneratorSpec& g, cplx s0 = {},
                           std::optional<SpectraStorage> storage = std::nullopt,
                           PrecomputeStrategy strategy = PrecomputeStrategy::branchwise);
    explicit SplitOperator(KernelSpectra spectra);

    ComplexTensor apply(const ComplexTensor& v, const ExecutionPolicy& policy = {},
                        RunMetrics* metrics = nullptr) const;

    const KernelSpectra& spectra() const { return spectra_; }
    const Shape& levels() const { return spectra_.levels(); }
    std::int64_t kernel_elements() const { return spectra_.stored_elements(); }
    std::uint64_t precompute_ns() const { return precompute_ns_; }

  private:
    KernelSpectra spectra_;
    std::uint64_t precompute_ns_ = 0;
};

} // namespace toesplit
