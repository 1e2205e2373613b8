#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace toesplit {

namespace {

// One plan per in-place strided layout. All tensor buffers share the same
// 64-byte alignment, so a plan made on one buffer is valid for any other via
// the new-array execute interface.
class FftwPlanCache {
  public:
    ~FftwPlanCache()
    {
        for (auto& [key, plan] : plans_)
            fftw_destroy_plan(plan);
    }

    fftw_plan get(std::int64_t n, std::int64_t inner, std::int64_t outer, int sign, cplx* ptr)
    {
        const Key key{n, inner, outer, sign};
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = plans_.find(key);
        if (it != plans_.end())
            return it->second;

        fftw_iodim64 dim;
        dim.n = n;
        dim.is = inner;
        dim.os = inner;
        fftw_iodim64 how[2];
        how[0].n = outer;
        how[0].is = n * inner;
        how[0].os = n * inner;
        how[1].n = inner;
        how[1].is = 1;
        how[1].os = 1;

        // FFTW_ESTIMATE leaves the caller's data untouched during planning.
        auto* raw = reinterpret_cast<fftw_complex*>(ptr);
        fftw_plan plan = fftw_plan_guru64_dft(1, &dim, 2, how, raw, raw, sign, FFTW_ESTIMATE);
        if (!plan)
            throw ResourceError("fftw planning failed");
        plans_.emplace(key, plan);
        return plan;
    }

  private:
    using Key = std::tuple<std::int64_t, std::int64_t, std::int64_t, int>;
    std::mutex mutex_;
    std::map<Key, fftw_plan> plans_;
};

FftwPlanCache& plan_cache()
{
    static FftwPlanCache cache;
    return cache;
}

class FftwProvider final : public FftProvider {
  public:
    void forward(ComplexTensor& t, int axis) const override { execute(t, axis, FFTW_FORWARD); }

    void inverse(ComplexTensor& t, int axis) const override
    {
        execute(t, axis, FFTW_BACKWARD);
        const double scale = 1.0 / static_cast<double>(t.axis_length(axis));
        for (auto& v : t.values())
            v *= scale;
    }

  private:
    static void execute(ComplexTensor& t, int axis, int sign)
    {
        const std::int64_t n = t.axis_length(axis);
        const std::int64_t inner = t.inner_count(axis);
        const std::int64_t outer = t.outer_count(axis);
        fftw_plan plan = plan_cache().get(n, inner, outer, sign, t.data());
        auto* raw = reinterpret_cast<fftw_complex*>(t.data());
        fftw_execute_dft(plan, raw, raw);
    }
};

} // namespace

const FftProvider& default_fft_provider()
{
    static FftwProvider provider;
    return provider;
}

void fft_axis_inplace(ComplexTensor& t, int axis, const FftProvider& provider)
{
    provider.forward(t, axis);
}

void ifft_axis_inplace(ComplexTensor& t, int axis, const FftProvider& provider)
{
    provider.inverse(t, axis);
}

ComplexTensor fft_axis(const ComplexTensor& t, int axis, const FftProvider& provider)
{
    ComplexTensor out = t.clone();
    provider.forward(out, axis);
    return out;
}

ComplexTensor ifft_axis(const ComplexTensor& t, int axis, const FftProvider& provider)
{
    ComplexTensor out = t.clone();
    provider.inverse(out, axis);
    return out;
}

void fft_all_axes_inplace(ComplexTensor& t, const FftProvider& provider)
{
    for (int a = 0; a < t.dims(); ++a)
        provider.forward(t, a);
}

void ifft_all_axes_inplace(ComplexTensor& t, const FftProvider& provider)
{
    for (int a = 0; a < t.dims(); ++a)
        provider.inverse(t, a);
}

} // namespace toesplit
