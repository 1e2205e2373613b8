#include <doctest.h>

#include "core/fft.hpp"
#include "oracle.hpp"

using namespace toesplit;
using testutil::dft_axis_oracle;
using testutil::random_tensor;

TEST_SUITE_BEGIN("fft");

TEST_CASE("delta and shifted delta spectra")
{
    ComplexTensor delta(Shape{2}, std::vector<cplx>{{1.0, 0.0}, {0.0, 0.0}});
    fft_axis_inplace(delta, 0);
    CHECK(std::abs(delta[0] - cplx{1.0, 0.0}) < 1e-15);
    CHECK(std::abs(delta[1] - cplx{1.0, 0.0}) < 1e-15);

    ComplexTensor shifted(Shape{2}, std::vector<cplx>{{0.0, 0.0}, {1.0, 0.0}});
    fft_axis_inplace(shifted, 0);
    CHECK(std::abs(shifted[0] - cplx{1.0, 0.0}) < 1e-15);
    CHECK(std::abs(shifted[1] - cplx{-1.0, 0.0}) < 1e-15);
}

TEST_CASE("inverse examples")
{
    ComplexTensor flat(Shape{2}, std::vector<cplx>{{1.0, 0.0}, {1.0, 0.0}});
    ifft_axis_inplace(flat, 0);
    CHECK(std::abs(flat[0] - cplx{1.0, 0.0}) < 1e-15);
    CHECK(std::abs(flat[1]) < 1e-15);

    ComplexTensor dc(Shape{2}, std::vector<cplx>{{2.0, 0.0}, {0.0, 0.0}});
    ifft_axis_inplace(dc, 0);
    CHECK(std::abs(dc[0] - cplx{1.0, 0.0}) < 1e-15);
    CHECK(std::abs(dc[1] - cplx{1.0, 0.0}) < 1e-15);

    ComplexTensor r = random_tensor(Shape{6}, 17);
    ComplexTensor rt = ifft_axis(fft_axis(r, 0), 0);
    CHECK(testutil::rel_err(rt, r) <= 1e-12);
}

TEST_CASE("round trip on every axis for every shape in {2..9}^d, d <= 3")
{
    std::uint64_t seed = 1;
    for (int d = 1; d <= 3; ++d) {
        std::vector<std::int64_t> ns(static_cast<std::size_t>(d), 2);
        while (true) {
            Shape shape(ns.begin(), ns.end());
            ComplexTensor t = random_tensor(shape, seed++);
            for (int axis = 0; axis < d; ++axis) {
                ComplexTensor rt = ifft_axis(fft_axis(t, axis), axis);
                REQUIRE(testutil::rel_err(rt, t) <= 1e-12);
            }
            int a = d - 1;
            for (; a >= 0; --a) {
                if (++ns[static_cast<std::size_t>(a)] <= 9)
                    break;
                ns[static_cast<std::size_t>(a)] = 2;
            }
            if (a < 0)
                break;
        }
    }
}

TEST_CASE("matches the direct-DFT oracle, including prime and mixed lengths")
{
    for (const Shape& shape : {Shape{5}, Shape{7}, Shape{13}, Shape{4, 5}, Shape{3, 7, 2}}) {
        ComplexTensor t = random_tensor(shape, 7 + shape.size());
        for (int axis = 0; axis < static_cast<int>(shape.size()); ++axis) {
            ComplexTensor via_fft = fft_axis(t, axis);
            ComplexTensor via_oracle = dft_axis_oracle(t, axis, false);
            CHECK(testutil::rel_err(via_fft, via_oracle) <= 1e-12);

            ComplexTensor inv_fft = ifft_axis(t, axis);
            ComplexTensor inv_oracle = dft_axis_oracle(t, axis, true);
            CHECK(testutil::rel_err(inv_fft, inv_oracle) <= 1e-12);
        }
    }
}

TEST_CASE("phase example: DFT(Pv) gives the odd coefficients of the doubled transform")
{
    // v = [0, 1]: Pv = [0, -i]; DFT(Pv) = [-i, i]; DFT([0,1,0,0]) = [1, -i, -1, i]
    ComplexTensor v(Shape{2}, std::vector<cplx>{{0.0, 0.0}, {1.0, 0.0}});
    ComplexTensor pv = phase_shift_axis(v, 0, false);
    CHECK(std::abs(pv[1] - cplx{0.0, -1.0}) < 1e-15);

    fft_axis_inplace(pv, 0);
    CHECK(std::abs(pv[0] - cplx{0.0, -1.0}) < 1e-14);
    CHECK(std::abs(pv[1] - cplx{0.0, 1.0}) < 1e-14);

    ComplexTensor padded(Shape{4}, std::vector<cplx>{{0.0, 0.0}, {1.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}});
    fft_axis_inplace(padded, 0);
    CHECK(std::abs(padded[0] - cplx{1.0, 0.0}) < 1e-14);
    CHECK(std::abs(padded[1] - cplx{0.0, -1.0}) < 1e-14);
    CHECK(std::abs(padded[2] - cplx{-1.0, 0.0}) < 1e-14);
    CHECK(std::abs(padded[3] - cplx{0.0, 1.0}) < 1e-14);
}

TEST_CASE("split identity: interleaved DFT(v)/DFT(Pv) equals DFT([v, 0]) for n in 2..16")
{
    for (std::int64_t n = 2; n <= 16; ++n) {
        ComplexTensor v = random_tensor(Shape{n}, 1000 + static_cast<std::uint64_t>(n));

        ComplexTensor even = fft_axis(v, 0);
        ComplexTensor odd = fft_axis(phase_shift_axis(v, 0, false), 0);

        ComplexTensor padded(Shape{2 * n});
        for (std::int64_t k = 0; k < n; ++k)
            padded[k] = v[k];
        fft_axis_inplace(padded, 0);

        double worst = 0.0;
        const double scale = max_abs(padded);
        for (std::int64_t l = 0; l < n; ++l) {
            worst = std::max(worst, std::abs(padded[2 * l] - even[l]));
            worst = std::max(worst, std::abs(padded[2 * l + 1] - odd[l]));
        }
        REQUIRE(worst / scale <= 1e-12);
    }
}

TEST_CASE("axis out of range is a contract violation")
{
    ComplexTensor t(Shape{4});
    CHECK_THROWS_AS(fft_axis_inplace(t, 1), std::out_of_range);
    CHECK_THROWS_AS(ifft_axis_inplace(t, -1), std::out_of_range);
}

TEST_SUITE_END();
