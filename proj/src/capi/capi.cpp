#include "toesplit.h"

#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "core/analysis.hpp"
#include "core/engine_embed.hpp"
#include "core/engine_split.hpp"
#include "core/instance.hpp"

using namespace toesplit;

struct ts_generator {
    GeneratorSpec spec;
};

struct ts_operator {
    // exactly one is set
    std::unique_ptr<SplitOperator> split;
    std::unique_ptr<EmbedOperator> embed;
};

namespace {

thread_local std::string g_last_error;

ts_status fail(ts_status code, const std::string& what)
{
    g_last_error = what;
    return code;
}

// Translate core exceptions to status codes.
template <typename Fn>
ts_status guarded(Fn&& fn)
{
    try {
        fn();
        g_last_error.clear();
        return TS_OK;
    } catch (const ShapeError& e) {
        return fail(TS_ERR_SHAPE, e.what());
    } catch (const SymmetryError& e) {
        return fail(TS_ERR_SYMMETRY, e.what());
    } catch (const CapExceededError& e) {
        return fail(TS_ERR_CAP_EXCEEDED, e.what());
    } catch (const ResourceError& e) {
        return fail(TS_ERR_RESOURCE, e.what());
    } catch (const IoError& e) {
        return fail(TS_ERR_IO, e.what());
    } catch (const KernelIntegrityError& e) {
        return fail(TS_ERR_LOGIC, e.what());
    } catch (const std::bad_alloc&) {
        return fail(TS_ERR_RESOURCE, "out of memory");
    } catch (const std::invalid_argument& e) {
        return fail(TS_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::domain_error& e) {
        return fail(TS_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::logic_error& e) {
        return fail(TS_ERR_LOGIC, e.what());
    } catch (const std::exception& e) {
        return fail(TS_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(TS_ERR_INTERNAL, "unknown error");
    }
}

Symmetry to_symmetry(ts_symmetry s)
{
    switch (s) {
    case TS_SYM_GENERAL: return Symmetry::general;
    case TS_SYM_SYMMETRIC: return Symmetry::symmetric;
    case TS_SYM_SKEW: return Symmetry::skew;
    }
    throw std::invalid_argument("invalid symmetry value");
}

std::optional<SpectraStorage> to_storage(ts_storage s)
{
    switch (s) {
    case TS_STORAGE_AUTO: return std::nullopt;
    case TS_STORAGE_FULL: return SpectraStorage::full;
    case TS_STORAGE_COMPRESSED: return SpectraStorage::mirror_compressed;
    }
    throw std::invalid_argument("invalid storage value");
}

Shape to_shape(int32_t d, const int64_t* levels)
{
    if (d < 1 || !levels)
        throw std::invalid_argument("levels must hold d >= 1 sizes");
    return Shape(levels, levels + d);
}

ComplexTensor tensor_from_interleaved(const Shape& shape, const double* data)
{
    if (!data)
        throw std::invalid_argument("null buffer");
    ComplexTensor t(shape);
    const std::int64_t n = t.size();
    for (std::int64_t i = 0; i < n; ++i)
        t[i] = cplx{data[2 * i], data[2 * i + 1]};
    return t;
}

void tensor_to_interleaved(const ComplexTensor& t, double* out)
{
    const std::int64_t n = t.size();
    for (std::int64_t i = 0; i < n; ++i) {
        out[2 * i] = t[i].real();
        out[2 * i + 1] = t[i].imag();
    }
}

void fill_metrics(ts_metrics* out, const RunMetrics& m, uint64_t kernel_elems, uint64_t precompute_ns)
{
    if (!out)
        return;
    out->fft_forward = m.fft_forward;
    out->fft_inverse = m.fft_inverse;
    out->diag_mults = m.diag_mults;
    out->phase_mults = m.phase_mults;
    out->peak_live_elems = m.peak_live_elems;
    out->kernel_elems = kernel_elems;
    out->apply_ns = m.apply_ns;
    out->precompute_ns = precompute_ns;
}

} // namespace

extern "C" {

const char* ts_version(void)
{
    return "1.0.0";
}

const char* ts_status_name(ts_status status)
{
    switch (status) {
    case TS_OK: return "ok";
    case TS_ERR_INVALID_ARGUMENT: return "invalid argument";
    case TS_ERR_SHAPE: return "shape mismatch";
    case TS_ERR_SYMMETRY: return "symmetry violation";
    case TS_ERR_CAP_EXCEEDED: return "cap exceeded";
    case TS_ERR_RESOURCE: return "resource exhausted";
    case TS_ERR_IO: return "io error";
    case TS_ERR_LOGIC: return "logic error";
    case TS_ERR_INTERNAL: return "internal error";
    }
    return "unknown";
}

const char* ts_last_error(void)
{
    return g_last_error.c_str();
}

ts_status ts_generator_create(int32_t d, const int64_t* levels, const double* lags,
                              ts_symmetry symmetry, ts_generator** out)
{
    return guarded([&] {
        if (!out)
            throw std::invalid_argument("null out pointer");
        Shape shape = to_shape(d, levels);
        Shape lag_shape;
        for (auto n : shape)
            lag_shape.push_back(2 * n - 1);
        ComplexTensor lag_tensor = tensor_from_interleaved(lag_shape, lags);
        *out = new ts_generator{GeneratorSpec(std::move(shape), std::move(lag_tensor), to_symmetry(symmetry))};
    });
}

ts_status ts_generator_random(int32_t d, const int64_t* levels, uint64_t seed, double variance,
                              ts_symmetry symmetry, ts_generator** out)
{
    return guarded([&] {
        if (!out)
            throw std::invalid_argument("null out pointer");
        *out = new ts_generator{random_generator(to_shape(d, levels), seed, variance, to_symmetry(symmetry))};
    });
}

ts_status ts_generator_from_json_file(const char* path, ts_generator** out)
{
    return guarded([&] {
        if (!out || !path)
            throw std::invalid_argument("null argument");
        *out = new ts_generator{GeneratorSpec::from_json_file(path)};
    });
}

ts_status ts_generator_to_json_file(const ts_generator* g, const char* path)
{
    return guarded([&] {
        if (!g || !path)
            throw std::invalid_argument("null argument");
        g->spec.to_json_file(path);
    });
}

int32_t ts_generator_dims(const ts_generator* g)
{
    return g ? g->spec.dims() : 0;
}

ts_status ts_generator_levels(const ts_generator* g, int64_t* out_levels)
{
    return guarded([&] {
        if (!g || !out_levels)
            throw std::invalid_argument("null argument");
        for (int a = 0; a < g->spec.dims(); ++a)
            out_levels[a] = g->spec.levels()[static_cast<std::size_t>(a)];
    });
}

void ts_generator_destroy(ts_generator* g)
{
    delete g;
}

ts_status ts_random_vector(int32_t d, const int64_t* levels, uint64_t seed, double variance,
                           double* out)
{
    return guarded([&] {
        if (!out)
            throw std::invalid_argument("null out buffer");
        ComplexTensor v = random_vector(to_shape(d, levels), seed, variance);
        tensor_to_interleaved(v, out);
    });
}

ts_status ts_operator_create_split(const ts_generator* g, double s0_re, double s0_im,
                                   ts_storage storage, ts_operator** out)
{
    return guarded([&] {
        if (!g || !out)
            throw std::invalid_argument("null argument");
        auto op = std::make_unique<ts_operator>();
        op->split = std::make_unique<SplitOperator>(g->spec, cplx{s0_re, s0_im}, to_storage(storage));
        *out = op.release();
    });
}

ts_status ts_operator_create_embed(const ts_generator* g, double s0_re, double s0_im,
                                   ts_storage storage, ts_operator** out)
{
    return guarded([&] {
        if (!g || !out)
            throw std::invalid_argument("null argument");
        auto op = std::make_unique<ts_operator>();
        op->embed = std::make_unique<EmbedOperator>(g->spec, cplx{s0_re, s0_im}, to_storage(storage));
        *out = op.release();
    });
}

ts_status ts_operator_apply(const ts_operator* op, const double* v, double* y,
                            const ts_policy* policy, ts_metrics* metrics)
{
    return guarded([&] {
        if (!op || !v || !y)
            throw std::invalid_argument("null argument");
        const Shape& levels = op->split ? op->split->levels() : op->embed->levels();
        ComplexTensor input = tensor_from_interleaved(levels, v);
        RunMetrics m;
        ComplexTensor result = [&] {
            if (op->split) {
                ExecutionPolicy pol;
                if (policy) {
                    pol.mode = policy->mode == TS_POLICY_PARALLEL ? ExecMode::eager_parallel
                                                                  : ExecMode::lazy_sequential;
                    pol.task_budget = policy->task_budget;
                }
                return op->split->apply(input, pol, &m);
            }
            return op->embed->apply(input, &m);
        }();
        tensor_to_interleaved(result, y);
        const auto kernel = op->split ? op->split->kernel_elements() : op->embed->kernel_elements();
        const auto pre_ns = op->split ? op->split->precompute_ns() : op->embed->precompute_ns();
        fill_metrics(metrics, m, static_cast<uint64_t>(kernel), pre_ns);
    });
}

int32_t ts_operator_dims(const ts_operator* op)
{
    if (!op)
        return 0;
    return static_cast<int32_t>((op->split ? op->split->levels() : op->embed->levels()).size());
}

ts_status ts_operator_levels(const ts_operator* op, int64_t* out_levels)
{
    return guarded([&] {
        if (!op || !out_levels)
            throw std::invalid_argument("null argument");
        const Shape& levels = op->split ? op->split->levels() : op->embed->levels();
        for (std::size_t a = 0; a < levels.size(); ++a)
            out_levels[a] = levels[a];
    });
}

ts_status ts_operator_kernel_elems(const ts_operator* op, uint64_t* out)
{
    return guarded([&] {
        if (!op || !out)
            throw std::invalid_argument("null argument");
        *out = static_cast<uint64_t>(op->split ? op->split->kernel_elements()
                                               : op->embed->kernel_elements());
    });
}

ts_status ts_operator_save_kernel(const ts_operator* op, const char* path)
{
    return guarded([&] {
        if (!op || !path)
            throw std::invalid_argument("null argument");
        if (!op->split)
            throw std::invalid_argument("kernel files hold split parity spectra only");
        op->split->spectra().save(path);
    });
}

ts_status ts_operator_load_split(const char* path, ts_operator** out)
{
    return guarded([&] {
        if (!path || !out)
            throw std::invalid_argument("null argument");
        auto op = std::make_unique<ts_operator>();
        op->split = std::make_unique<SplitOperator>(KernelSpectra::load(path));
        *out = op.release();
    });
}

void ts_operator_destroy(ts_operator* op)
{
    delete op;
}

ts_status ts_naive_matvec(const ts_generator* g, const double* v, double* y, int64_t cap)
{
    return guarded([&] {
        if (!g || !v || !y)
            throw std::invalid_argument("null argument");
        ComplexTensor input = tensor_from_interleaved(g->spec.levels(), v);
        ComplexTensor result = naive_matvec(g->spec, input, cap);
        tensor_to_interleaved(result, y);
    });
}

ts_status ts_predict(int32_t d, double n, ts_complexity* out)
{
    return guarded([&] {
        if (!out)
            throw std::invalid_argument("null out pointer");
        ComplexityReport r = ratios(n, d);
        out->d = r.d;
        out->n = r.n;
        out->s = r.s;
        out->c_embed = r.c_embed;
        out->c_split = r.c_split;
        out->r_c = r.r_c;
        out->r_c_asymptote = r.r_c_asymptote;
        out->r_m = r.r_m;
        out->r_m_sym = r.r_m_sym;
    });
}

} // extern "C"
