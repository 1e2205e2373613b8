#include <doctest.h>

#include "core/tensor.hpp"
#include "oracle.hpp"

using namespace toesplit;
using testutil::random_tensor;

TEST_SUITE_BEGIN("tensor");

TEST_CASE("meter peak is the max of live counts over scripted sequences")
{
    AllocationMeter m;
    m.on_alloc(4);
    m.on_alloc(6);
    CHECK(m.current() == 10);
    CHECK(m.peak() == 10);
    m.on_free(4);
    m.on_alloc(2);
    CHECK(m.current() == 8);
    CHECK(m.peak() == 10);
    m.on_alloc(5);
    CHECK(m.peak() == 13);
    m.on_free(13);
    CHECK(m.current() == 0);
    CHECK(m.peak() == 13);

    m.reset();
    CHECK(m.current() == 0);
    CHECK(m.peak() == 0);
}

TEST_CASE("tensor construction and shape invariants")
{
    ComplexTensor t(Shape{2, 3, 4});
    CHECK(t.size() == 24);
    CHECK(t.dims() == 3);
    CHECK(t.axis_length(1) == 3);
    CHECK(t.inner_count(0) == 12);
    CHECK(t.outer_count(2) == 6);
    for (const auto& v : t.values())
        CHECK(v == cplx{0.0, 0.0});

    CHECK_THROWS_AS(ComplexTensor(Shape{}), ShapeError);
    CHECK_THROWS_AS(ComplexTensor(Shape{2, 0}), ShapeError);
    CHECK_THROWS_AS(t.axis_length(3), std::out_of_range);
    CHECK_THROWS_AS(t.axis_length(-1), std::out_of_range);
}

TEST_CASE("tensor allocations register with a bound meter")
{
    AllocationMeter m;
    {
        ComplexTensor a(Shape{4, 4}, &m);
        CHECK(m.current() == 16);
        {
            ComplexTensor b = a.clone(&m);
            CHECK(m.current() == 32);
            ComplexTensor c = std::move(b); // ownership moves, count unchanged
            CHECK(m.current() == 32);
        }
        CHECK(m.current() == 16);
        a.detach_meter();
        CHECK(m.current() == 0);
    }
    CHECK(m.peak() == 32);
}

TEST_CASE("phase shift examples and conjugate round trip")
{
    // n=2: P = diag[1, -i]
    ComplexTensor v(Shape{2}, std::vector<cplx>{{1.0, 0.0}, {0.0, 0.0}});
    phase_shift_axis_inplace(v, 0, false);
    CHECK(v[0] == cplx{1.0, 0.0});
    CHECK(v[1] == cplx{0.0, 0.0});

    ComplexTensor w(Shape{2}, std::vector<cplx>{{0.0, 0.0}, {1.0, 0.0}});
    phase_shift_axis_inplace(w, 0, false);
    CHECK(std::abs(w[1] - cplx{0.0, -1.0}) < 1e-15);

    ComplexTensor r = random_tensor(Shape{5}, 99);
    ComplexTensor rr = phase_shift_axis(phase_shift_axis(r, 0, false), 0, true);
    CHECK(testutil::rel_err(rr, r) < 1e-15);
}

TEST_CASE("scale_add")
{
    ComplexTensor a(Shape{2}, std::vector<cplx>{{1.0, 0.0}, {2.0, 0.0}});
    ComplexTensor b(Shape{2}, std::vector<cplx>{{3.0, 0.0}, {4.0, 0.0}});

    ComplexTensor zero_scale = scale_add(a, b, cplx{0.0, 0.0});
    CHECK(zero_scale[0] == cplx{1.0, 0.0});
    CHECK(zero_scale[1] == cplx{2.0, 0.0});

    ComplexTensor plain = scale_add(a, b, cplx{1.0, 0.0});
    CHECK(plain[0] == cplx{4.0, 0.0});
    CHECK(plain[1] == cplx{6.0, 0.0});

    ComplexTensor zeros(Shape{2});
    ComplexTensor twos(Shape{2}, std::vector<cplx>{{2.0, 0.0}, {2.0, 0.0}});
    ComplexTensor halved = scale_add(zeros, twos, cplx{0.5, 0.0});
    CHECK(halved[0] == cplx{1.0, 0.0});
    CHECK(halved[1] == cplx{1.0, 0.0});

    ComplexTensor wrong(Shape{3});
    CHECK_THROWS_AS(scale_add(a, wrong, cplx{1.0, 0.0}), ShapeError);
}

TEST_CASE("embed_corner then shrink_to_corner round trips")
{
    ComplexTensor src = random_tensor(Shape{2, 3}, 5);
    AllocationMeter m;
    ComplexTensor big(Shape{4, 6}, &m);
    embed_corner(src, big);

    // padding lanes are zero
    std::vector<std::int64_t> idx{3, 5};
    CHECK(big.at(idx) == cplx{0.0, 0.0});

    CHECK(m.current() == 24);
    big.shrink_to_corner(Shape{2, 3});
    CHECK(m.current() == 6);
    CHECK(m.peak() == 24);
    CHECK(testutil::rel_err(big, src) == 0.0);

    CHECK_THROWS_AS(big.shrink_to_corner(Shape{3, 3}), ShapeError);
    big.detach_meter();
}

TEST_CASE("multi-index offset is row-major, level 1 outermost")
{
    ComplexTensor t(Shape{2, 3});
    std::vector<std::int64_t> idx{1, 2};
    CHECK(t.offset(idx) == 5);
    idx = {0, 2};
    CHECK(t.offset(idx) == 2);
    idx = {2, 0};
    CHECK_THROWS_AS(t.offset(idx), std::out_of_range);
}

TEST_SUITE_END();
