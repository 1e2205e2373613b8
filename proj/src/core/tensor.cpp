#include "tensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <new>
#include <numbers>
#include <string>

namespace toesplit {

namespace {

constexpr std::size_t kAlignment = 64;

cplx* alloc_elems(std::int64_t n)
{
    if (n == 0)
        return nullptr;
    void* p = ::operator new(static_cast<std::size_t>(n) * sizeof(cplx), std::align_val_t{kAlignment});
    return static_cast<cplx*>(p);
}

void free_elems(cplx* p) noexcept
{
    if (p)
        ::operator delete(p, std::align_val_t{kAlignment});
}

void check_shape(const Shape& shape)
{
    if (shape.empty())
        throw ShapeError("tensor shape must have at least one level");
    for (auto n : shape)
        if (n < 1)
            throw ShapeError("tensor axis lengths must be >= 1");
}

} // namespace

std::int64_t shape_volume(const Shape& shape)
{
    std::int64_t v = 1;
    for (auto n : shape)
        v *= n;
    return v;
}

void AllocationMeter::on_alloc(std::int64_t elems) noexcept
{
    const std::int64_t now = current_.fetch_add(elems, std::memory_order_relaxed) + elems;
    std::int64_t prev = peak_.load(std::memory_order_relaxed);
    while (prev < now && !peak_.compare_exchange_weak(prev, now, std::memory_order_relaxed)) {
    }
}

void AllocationMeter::on_free(std::int64_t elems) noexcept
{
    current_.fetch_sub(elems, std::memory_order_relaxed);
}

void AllocationMeter::reset() noexcept
{
    current_.store(0, std::memory_order_relaxed);
    peak_.store(0, std::memory_order_relaxed);
}

ComplexTensor::ComplexTensor(Shape shape, AllocationMeter* meter)
    : shape_(std::move(shape)), meter_(meter)
{
    check_shape(shape_);
    size_ = shape_volume(shape_);
    data_ = alloc_elems(size_);
    std::fill(data_, data_ + size_, cplx{0.0, 0.0});
    if (meter_)
        meter_->on_alloc(size_);
}

ComplexTensor::ComplexTensor(Shape shape, std::span<const cplx> values, AllocationMeter* meter)
    : ComplexTensor(std::move(shape), meter)
{
    if (static_cast<std::int64_t>(values.size()) != size_)
        throw ShapeError("value count " + std::to_string(values.size()) +
                         " does not match shape volume " + std::to_string(size_));
    std::copy(values.begin(), values.end(), data_);
}

ComplexTensor::ComplexTensor(ComplexTensor&& other) noexcept
    : shape_(std::move(other.shape_)), size_(other.size_), data_(other.data_), meter_(other.meter_)
{
    other.shape_.clear();
    other.size_ = 0;
    other.data_ = nullptr;
    other.meter_ = nullptr;
}

ComplexTensor& ComplexTensor::operator=(ComplexTensor&& other) noexcept
{
    if (this != &other) {
        release();
        shape_ = std::move(other.shape_);
        size_ = other.size_;
        data_ = other.data_;
        meter_ = other.meter_;
        other.shape_.clear();
        other.size_ = 0;
        other.data_ = nullptr;
        other.meter_ = nullptr;
    }
    return *this;
}

ComplexTensor::~ComplexTensor()
{
    release();
}

void ComplexTensor::detach_meter() noexcept
{
    if (meter_) {
        meter_->on_free(size_);
        meter_ = nullptr;
    }
}

void ComplexTensor::release() noexcept
{
    if (data_) {
        if (meter_)
            meter_->on_free(size_);
        free_elems(data_);
        data_ = nullptr;
        size_ = 0;
    }
}

ComplexTensor ComplexTensor::clone(AllocationMeter* meter) const
{
    ComplexTensor out(shape_, meter);
    std::memcpy(out.data_, data_, static_cast<std::size_t>(size_) * sizeof(cplx));
    return out;
}

std::int64_t ComplexTensor::axis_length(int axis) const
{
    check_axis(axis);
    return shape_[static_cast<std::size_t>(axis)];
}

void ComplexTensor::check_axis(int axis) const
{
    if (axis < 0 || axis >= dims())
        throw std::out_of_range("axis " + std::to_string(axis) + " out of range for " +
                                std::to_string(dims()) + " levels");
}

std::int64_t ComplexTensor::offset(std::span<const std::int64_t> index) const
{
    if (static_cast<int>(index.size()) != dims())
        throw ShapeError("multi-index rank mismatch");
    std::int64_t off = 0;
    for (int a = 0; a < dims(); ++a) {
        if (index[static_cast<std::size_t>(a)] < 0 || index[static_cast<std::size_t>(a)] >= shape_[static_cast<std::size_t>(a)])
            throw std::out_of_range("multi-index out of range");
        off = off * shape_[static_cast<std::size_t>(a)] + index[static_cast<std::size_t>(a)];
    }
    return off;
}

std::int64_t ComplexTensor::inner_count(int axis) const
{
    check_axis(axis);
    std::int64_t v = 1;
    for (int a = axis + 1; a < dims(); ++a)
        v *= shape_[static_cast<std::size_t>(a)];
    return v;
}

std::int64_t ComplexTensor::outer_count(int axis) const
{
    check_axis(axis);
    std::int64_t v = 1;
    for (int a = 0; a < axis; ++a)
        v *= shape_[static_cast<std::size_t>(a)];
    return v;
}

void ComplexTensor::fill(cplx value)
{
    std::fill(data_, data_ + size_, value);
}

void ComplexTensor::shrink_to_corner(const Shape& new_shape)
{
    if (static_cast<int>(new_shape.size()) != dims())
        throw ShapeError("shrink_to_corner rank mismatch");
    check_shape(new_shape);
    for (int a = 0; a < dims(); ++a)
        if (new_shape[static_cast<std::size_t>(a)] > shape_[static_cast<std::size_t>(a)])
            throw ShapeError("shrink_to_corner target exceeds current shape");

    const std::int64_t new_size = shape_volume(new_shape);
    // Row-major corner gather: destination offsets never exceed source
    // offsets, so a forward in-place copy is safe.
    std::vector<std::int64_t> idx(new_shape.size(), 0);
    const int d = dims();
    for (std::int64_t dst = 0; dst < new_size; ++dst) {
        std::int64_t src = 0;
        for (int a = 0; a < d; ++a)
            src = src * shape_[static_cast<std::size_t>(a)] + idx[static_cast<std::size_t>(a)];
        data_[dst] = data_[src];
        for (int a = d - 1; a >= 0; --a) {
            if (++idx[static_cast<std::size_t>(a)] < new_shape[static_cast<std::size_t>(a)])
                break;
            idx[static_cast<std::size_t>(a)] = 0;
        }
    }
    if (meter_) {
        meter_->on_free(size_);
        meter_->on_alloc(new_size);
    }
    shape_ = new_shape;
    size_ = new_size;
    // Buffer capacity is retained; only the logical extent shrinks.
}

void phase_shift_axis_inplace(ComplexTensor& t, int axis, bool conjugate)
{
    const std::int64_t n = t.axis_length(axis);
    const std::int64_t inner = t.inner_count(axis);
    const std::int64_t outer = t.outer_count(axis);

    std::vector<cplx> phase(static_cast<std::size_t>(n));
    const double sign = conjugate ? 1.0 : -1.0;
    for (std::int64_t k = 0; k < n; ++k)
        phase[static_cast<std::size_t>(k)] =
            std::polar(1.0, sign * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));

    cplx* p = t.data();
    for (std::int64_t o = 0; o < outer; ++o)
        for (std::int64_t k = 0; k < n; ++k) {
            const cplx f = phase[static_cast<std::size_t>(k)];
            cplx* row = p + (o * n + k) * inner;
            for (std::int64_t i = 0; i < inner; ++i)
                row[i] *= f;
        }
}

ComplexTensor phase_shift_axis(const ComplexTensor& t, int axis, bool conjugate, AllocationMeter* meter)
{
    ComplexTensor out = t.clone(meter);
    phase_shift_axis_inplace(out, axis, conjugate);
    return out;
}

ComplexTensor scale_add(const ComplexTensor& a, const ComplexTensor& b, cplx alpha)
{
    if (a.shape() != b.shape())
        throw ShapeError("scale_add shape mismatch");
    ComplexTensor out = a.clone();
    cplx* pa = out.data();
    const cplx* pb = b.data();
    const std::int64_t n = out.size();
    for (std::int64_t i = 0; i < n; ++i)
        pa[i] += alpha * pb[i];
    return out;
}

void embed_corner(const ComplexTensor& src, ComplexTensor& dst)
{
    if (src.dims() != dst.dims())
        throw ShapeError("embed_corner rank mismatch");
    for (int a = 0; a < src.dims(); ++a)
        if (src.shape()[static_cast<std::size_t>(a)] > dst.shape()[static_cast<std::size_t>(a)])
            throw ShapeError("embed_corner source exceeds destination shape");

    dst.fill(cplx{0.0, 0.0});
    std::vector<std::int64_t> idx(src.shape().size(), 0);
    const int d = src.dims();
    const std::int64_t n = src.size();
    for (std::int64_t s = 0; s < n; ++s) {
        std::int64_t off = 0;
        for (int a = 0; a < d; ++a)
            off = off * dst.shape()[static_cast<std::size_t>(a)] + idx[static_cast<std::size_t>(a)];
        dst[off] = src[s];
        for (int a = d - 1; a >= 0; --a) {
            if (++idx[static_cast<std::size_t>(a)] < src.shape()[static_cast<std::size_t>(a)])
                break;
            idx[static_cast<std::size_t>(a)] = 0;
        }
    }
}

double max_abs(const ComplexTensor& t)
{
    double m = 0.0;
    for (const auto& v : t.values())
        m = std::max(m, std::abs(v));
    return m;
}

double max_rel_error(const ComplexTensor& a, const ComplexTensor& b)
{
    if (a.shape() != b.shape())
        throw ShapeError("max_rel_error shape mismatch");
    double diff = 0.0;
    for (std::int64_t i = 0; i < a.size(); ++i)
        diff = std::max(diff, std::abs(a[i] - b[i]));
    const double scale = max_abs(b);
    if (scale == 0.0)
        return diff;
    return diff / scale;
}

} // namespace toesplit
