#include "engine_split.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <future>
#include <numbers>

namespace toesplit {

namespace {

void merge_loop(ComplexTensor& even, const ComplexTensor& odd, int axis)
{
    if (even.shape() != odd.shape())
        throw ShapeError("merge shape mismatch");
    const std::int64_t n = even.axis_length(axis);
    const std::int64_t inner = even.inner_count(axis);
    const std::int64_t outer = even.outer_count(axis);

    // conj(P)_k = exp(+i*pi*k/n)
    std::vector<cplx> phase(static_cast<std::size_t>(n));
    for (std::int64_t k = 0; k < n; ++k)
        phase[static_cast<std::size_t>(k)] =
            std::polar(1.0, std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));

    cplx* pe = even.data();
    const cplx* po = odd.data();
    for (std::int64_t o = 0; o < outer; ++o)
        for (std::int64_t k = 0; k < n; ++k) {
            const cplx f = phase[static_cast<std::size_t>(k)];
            cplx* re = pe + (o * n + k) * inner;
            const cplx* ro = po + (o * n + k) * inner;
            for (std::int64_t i = 0; i < inner; ++i)
                re[i] = 0.5 * (re[i] + f * ro[i]);
        }
}

struct RunContext {
    const KernelSpectra& spectra;
    const FftProvider& provider;
    int d = 0;
    bool parallel = false;
    AllocationMeter meter{};
    std::atomic<std::uint64_t> fft_forward{0};
    std::atomic<std::uint64_t> fft_inverse{0};
    std::atomic<std::uint64_t> diag_mults{0};
    std::atomic<std::uint64_t> phase_mults{0};
    std::atomic<int> permits{0};

    bool try_acquire_permit()
    {
        int cur = permits.load(std::memory_order_relaxed);
        while (cur > 0)
            if (permits.compare_exchange_weak(cur, cur - 1, std::memory_order_acq_rel))
                return true;
        return false;
    }
};

// The node at `depth` owns axis depth-1 (transformed on entry, inverse
// transformed before returning; the root performs no transform) and splits
// axis `depth`. The even child continues in the parent's buffer, only the
// odd child allocates.
void branch(RunContext& ctx, ComplexTensor& t, int depth, BranchId b)
{
    if (depth > 0) {
        ctx.provider.forward(t, depth - 1);
        ctx.fft_forward.fetch_add(1, std::memory_order_relaxed);
    }

    if (depth < ctx.d) {
        ComplexTensor child = phase_shift_axis(t, depth, false, &ctx.meter);
        ctx.phase_mults.fetch_add(static_cast<std::uint64_t>(t.size()), std::memory_order_relaxed);
        const BranchId odd_id = next_id(b, depth);

        if (ctx.parallel && ctx.try_acquire_permit()) {
            auto odd_task = std::async(std::launch::async, [&ctx, &child, depth, odd_id] {
                branch(ctx, child, depth + 1, odd_id);
                ctx.permits.fetch_add(1, std::memory_order_acq_rel);
            });
            branch(ctx, t, depth + 1, b);
            odd_task.get();
        } else {
            branch(ctx, t, depth + 1, b);
            branch(ctx, child, depth + 1, odd_id);
        }

        merge_loop(t, child, depth);
        ctx.phase_mults.fetch_add(static_cast<std::uint64_t>(t.size()), std::memory_order_relaxed);
    } else {
        ctx.spectra.multiply_into(t, b);
        ctx.diag_mults.fetch_add(static_cast<std::uint64_t>(t.size()), std::memory_order_relaxed);
    }

    if (depth > 0) {
        ctx.provider.inverse(t, depth - 1);
        ctx.fft_inverse.fetch_add(1, std::memory_order_relaxed);
    }
}

} // namespace

ComplexTensor apply_split(const KernelSpectra& k, const ComplexTensor& v,
                          const ExecutionPolicy& policy, RunMetrics* metrics,
                          const FftProvider& provider)
{
    if (v.shape() != k.levels())
        throw ShapeError("input vector shape does not match the operator's levels");
    if (policy.task_budget < 1)
        throw std::invalid_argument("task budget must be >= 1");

    RunContext ctx{.spectra = k,
                   .provider = provider,
                   .d = k.dims(),
                   .parallel = policy.mode == ExecMode::eager_parallel};
    ctx.permits.store(policy.task_budget - 1, std::memory_order_relaxed);

    const auto t0 = std::chrono::steady_clock::now();
    ComplexTensor y = v.clone(&ctx.meter);
    branch(ctx, y, 0, BranchId{});
    const auto t1 = std::chrono::steady_clock::now();

    if (metrics) {
        metrics->fft_forward = ctx.fft_forward.load();
        metrics->fft_inverse = ctx.fft_inverse.load();
        metrics->diag_mults = ctx.diag_mults.load();
        metrics->phase_mults = ctx.phase_mults.load();
        metrics->peak_live_elems = ctx.meter.peak();
        metrics->apply_ns =
            static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
    }
    y.detach_meter(); // outlives the run-local meter
    return y;
}

std::pair<ComplexTensor, RunMetrics> toe_mul_split(const KernelSpectra& k, const ComplexTensor& v,
                                                   const ExecutionPolicy& policy)
{
    RunMetrics metrics;
    ComplexTensor y = apply_split(k, v, policy, &metrics);
    return {std::move(y), metrics};
}

ComplexTensor spt_brn(const ComplexTensor& v, int axis, AllocationMeter* meter, RunMetrics* metrics)
{
    ComplexTensor child = phase_shift_axis(v, axis, false, meter);
    if (metrics)
        metrics->phase_mults += static_cast<std::uint64_t>(v.size());
    return child;
}

void mrg_brn_inplace(ComplexTensor& even, const ComplexTensor& odd, int axis, RunMetrics* metrics)
{
    merge_loop(even, odd, axis);
    if (metrics)
        metrics->phase_mults += static_cast<std::uint64_t>(even.size());
}

ComplexTensor mrg_brn(const ComplexTensor& even, const ComplexTensor& odd, int axis)
{
    ComplexTensor out = even.clone();
    merge_loop(out, odd, axis);
    return out;
}

void mul_brn_inplace(ComplexTensor& v, const KernelSpectra& k, BranchId b, RunMetrics* metrics)
{
    k.multiply_into(v, b);
    if (metrics)
        metrics->diag_mults += static_cast<std::uint64_t>(v.size());
}

ComplexTensor mul_brn(const ComplexTensor& v, const KernelSpectra& k, BranchId b)
{
    ComplexTensor out = v.clone();
    mul_brn_inplace(out, k, b);
    return out;
}

namespace {

struct BuiltSpectra {
    KernelSpectra spectra;
    std::uint64_t ns;
};

BuiltSpectra build_spectra(const GeneratorSpec& g, cplx s0, std::optional<SpectraStorage> storage,
                           PrecomputeStrategy strategy)
{
    const auto t0 = std::chrono::steady_clock::now();
    EmbeddedGenerator embedded = embed_generator(g, s0);
    KernelSpectra full = precompute_spectra(embedded, strategy, g.symmetry());

    bool compress = false;
    if (storage.has_value()) {
        compress = *storage == SpectraStorage::mirror_compressed;
    } else {
        // auto mode: compress whenever the mirror property can hold
        compress = g.symmetry() == Symmetry::symmetric ||
                   (g.symmetry() == Symmetry::skew && s0 == cplx{});
    }
    KernelSpectra result = compress ? compress_spectra(full, g) : std::move(full);
    const auto t1 = std::chrono::steady_clock::now();
    return {std::move(result),
            static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count())};
}

} // namespace

SplitOperator::SplitOperator(const GeneratorSpec& g, cplx s0, std::optional<SpectraStorage> storage,
                             PrecomputeStrategy strategy)
    : SplitOperator([&] {
          BuiltSpectra built = build_spectra(g, s0, storage, strategy);
          SplitOperator op(std::move(built.spectra));
          op.precompute_ns_ = built.ns;
          return op;
      }())
{
}

SplitOperator::SplitOperator(KernelSpectra spectra) : spectra_(std::move(spectra)) {}

ComplexTensor SplitOperator::apply(const ComplexTensor& v, const ExecutionPolicy& policy,
                                   RunMetrics* metrics) const
{
    return apply_split(spectra_, v, policy, metrics);
}

} // namespace toesplit
