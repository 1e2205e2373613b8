#pragma once

#include <atomic>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "errors.hpp"

namespace toesplit {

using cplx = std::complex<double>;
using Shape = std::vector<std::int64_t>;

std::int64_t shape_volume(const Shape& shape);

/// Tracks live complex elements across tensor allocations. `peak` is the
/// maximum of `current` over all allocation events since the last reset.
/// Shared atomics: safe to update from concurrent branch tasks.
class AllocationMeter {
  public:
    void on_alloc(std::int64_t elems) noexcept;
    void on_free(std::int64_t elems) noexcept;

    std::int64_t current() const noexcept { return current_.load(std::memory_order_relaxed); }
    std::int64_t peak() const noexcept { return peak_.load(std::memory_order_relaxed); }
    void reset() noexcept;

  private:
    std::atomic<std::int64_t> current_{0};
    std::atomic<std::int64_t> peak_{0};
};

/// d-dimensional complex tensor, row-major with level 1 (axis 0) outermost.
/// Data is 64-byte aligned so FFT plans can be shared across buffers.
/// Move-only; copies are explicit via clone() so every allocation that a
/// meter sees is deliberate.
class ComplexTensor {
  public:
    ComplexTensor() = default;
    explicit ComplexTensor(Shape shape, AllocationMeter* meter = nullptr);
    ComplexTensor(Shape shape, std::span<const cplx> values, AllocationMeter* meter = nullptr);

    ComplexTensor(const ComplexTensor&) = delete;
    ComplexTensor& operator=(const ComplexTensor&) = delete;
    ComplexTensor(ComplexTensor&& other) noexcept;
    ComplexTensor& operator=(ComplexTensor&& other) noexcept;
    ~ComplexTensor();

    ComplexTensor clone(AllocationMeter* meter = nullptr) const;

    int dims() const { return static_cast<int>(shape_.size()); }
    const Shape& shape() const { return shape_; }
    std::int64_t size() const { return size_; }
    std::int64_t axis_length(int axis) const;

    cplx* data() { return data_; }
    const cplx* data() const { return data_; }
    std::span<cplx> values() { return {data_, static_cast<std::size_t>(size_)}; }
    std::span<const cplx> values() const { return {data_, static_cast<std::size_t>(size_)}; }

    cplx& operator[](std::int64_t i) { return data_[i]; }
    const cplx& operator[](std::int64_t i) const { return data_[i]; }

    /// Row-major offset of a multi-index.
    std::int64_t offset(std::span<const std::int64_t> index) const;
    cplx& at(std::span<const std::int64_t> index) { return data_[offset(index)]; }
    const cplx& at(std::span<const std::int64_t> index) const { return data_[offset(index)]; }

    /// Product of lengths of axes after `axis` (the axis stride).
    std::int64_t inner_count(int axis) const;
    /// Product of lengths of axes before `axis`.
    std::int64_t outer_count(int axis) const;

    void fill(cplx value);

    /// In-place projection onto the leading corner `new_shape` (new_shape[a]
    /// <= shape[a] per axis). Compacts data forward within the existing
    /// buffer and shrinks the logical element count, so a bound meter sees
    /// the drop without a transient copy.
    void shrink_to_corner(const Shape& new_shape);

    /// Leave the bound meter's accounting scope (counts as a free); used
    /// when a tensor outlives the run whose meter tracked it.
    void detach_meter() noexcept;

    bool empty() const { return data_ == nullptr; }

  private:
    void check_axis(int axis) const;
    void release() noexcept;

    Shape shape_;
    std::int64_t size_ = 0;
    cplx* data_ = nullptr;
    AllocationMeter* meter_ = nullptr;
};

/// Entry at index k along `axis` is multiplied by exp(-i*pi*k/n), or its
/// conjugate when `conjugate` is set. This is the half-step phase that turns
/// a length-n transform into the odd coefficients of the length-2n transform.
void phase_shift_axis_inplace(ComplexTensor& t, int axis, bool conjugate);
ComplexTensor phase_shift_axis(const ComplexTensor& t, int axis, bool conjugate,
                               AllocationMeter* meter = nullptr);

/// a + alpha*b, elementwise. Shapes must match.
ComplexTensor scale_add(const ComplexTensor& a, const ComplexTensor& b, cplx alpha);

/// Copy `src` into the leading corner of `dst`; the rest of `dst` is zeroed.
/// src.shape[a] <= dst.shape[a] per axis.
void embed_corner(const ComplexTensor& src, ComplexTensor& dst);

double max_abs(const ComplexTensor& t);
/// max_i |a_i - b_i| / max_i |b_i|; if b is identically zero, max_i |a_i|.
double max_rel_error(const ComplexTensor& a, const ComplexTensor& b);

} // namespace toesplit
