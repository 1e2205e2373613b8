#pragma once

#include "tensor.hpp"

namespace toesplit {

/// Single-axis DFT contract. Forward is the unnormalized DFT with kernel
/// exp(-2*pi*i*l*k/N); inverse carries the 1/N factor, so
/// inverse(forward(x, a), a) == x. Arbitrary axis lengths are supported
/// (mixed radix), not only powers of two.
class FftProvider {
  public:
    virtual ~FftProvider() = default;
    /// Replace every 1-d fiber along `axis` by its forward DFT, in place.
    virtual void forward(ComplexTensor& t, int axis) const = 0;
    /// Inverse DFT with 1/N normalization, in place.
    virtual void inverse(ComplexTensor& t, int axis) const = 0;
};

/// Process-wide FFTW3-backed provider. Plans are cached per (length, stride,
/// count) layout and reused across tensors; execution is thread-safe.
const FftProvider& default_fft_provider();

void fft_axis_inplace(ComplexTensor& t, int axis, const FftProvider& provider = default_fft_provider());
void ifft_axis_inplace(ComplexTensor& t, int axis, const FftProvider& provider = default_fft_provider());

ComplexTensor fft_axis(const ComplexTensor& t, int axis, const FftProvider& provider = default_fft_provider());
ComplexTensor ifft_axis(const ComplexTensor& t, int axis, const FftProvider& provider = default_fft_provider());

/// Forward (or inverse) transform along every axis in turn.
void fft_all_axes_inplace(ComplexTensor& t, const FftProvider& provider = default_fft_provider());
void ifft_all_axes_inplace(ComplexTensor& t, const FftProvider& provider = default_fft_provider());

} // namespace toesplit
