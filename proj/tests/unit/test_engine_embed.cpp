#include <doctest.h>

#include "core/engine_embed.hpp"
#include "core/instance.hpp"
#include "oracle.hpp"

using namespace toesplit;
using testutil::random_tensor;

TEST_SUITE_BEGIN("engine_embed");

TEST_CASE("worked 2x2 case")
{
    GeneratorSpec g(Shape{2}, ComplexTensor(Shape{3}, std::vector<cplx>{{2, 0}, {1, 0}, {3, 0}}),
                    Symmetry::general);
    ComplexTensor v(Shape{2}, std::vector<cplx>{{1, 0}, {1, 0}});
    auto [y, m] = toe_mul_embed(g, v);
    CHECK(std::abs(y[0] - cplx{3, 0}) <= 1e-12);
    CHECK(std::abs(y[1] - cplx{4, 0}) <= 1e-12);
    CHECK(m.fft_forward == 1);
    CHECK(m.fft_inverse == 1);
}

TEST_CASE("identity generator is the identity operator")
{
    // t_0 = 1, all other lags 0
    ComplexTensor lags(Shape{5, 3});
    std::vector<std::int64_t> center{2, 1};
    lags.at(center) = cplx{1, 0};
    GeneratorSpec g(Shape{3, 2}, std::move(lags), Symmetry::general);

    ComplexTensor v = random_tensor(Shape{3, 2}, 4);
    auto [y, m] = toe_mul_embed(g, v);
    CHECK(max_rel_error(y, v) <= 1e-13);
}

TEST_CASE("embed matches the dense oracle")
{
    for (auto sym : {Symmetry::general, Symmetry::symmetric, Symmetry::skew}) {
        GeneratorSpec g = random_generator(Shape{3, 3}, 6, 1.0, sym);
        ComplexTensor v = random_vector(Shape{3, 3}, 6, 1.0);
        auto [y, m] = toe_mul_embed(g, v);
        CHECK(max_rel_error(y, naive_matvec(g, v)) <= 1e-10);
    }
}

TEST_CASE("working peak and multiply counter anchor the memory model")
{
    for (int d = 1; d <= 4; ++d) {
        Shape levels(static_cast<std::size_t>(d), 4);
        const std::int64_t s = shape_volume(levels);
        const std::int64_t p = std::int64_t{1} << d;
        GeneratorSpec g = random_generator(levels, 13, 1.0, Symmetry::general);
        EmbedOperator op(g);
        RunMetrics m;
        op.apply(random_vector(levels, 13, 1.0), &m);
        CHECK(m.peak_live_elems >= p * s);
        CHECK(m.diag_mults == static_cast<std::uint64_t>(p * s));
        CHECK(m.fft_forward == static_cast<std::uint64_t>(d));
        CHECK(m.fft_inverse == static_cast<std::uint64_t>(d));
    }
}

TEST_CASE("mirror-compressed symbol agrees with full storage")
{
    for (auto sym : {Symmetry::symmetric, Symmetry::skew}) {
        const Shape levels{4, 6};
        GeneratorSpec g = random_generator(levels, 29, 1.0, sym);
        ComplexTensor v = random_vector(levels, 29, 1.0);

        EmbedOperator full(g, cplx{}, SpectraStorage::full);
        EmbedOperator packed(g, cplx{}, SpectraStorage::mirror_compressed);
        CHECK(packed.kernel_elements() == (4 + 1) * (6 + 1));

        ComplexTensor yf = full.apply(v);
        ComplexTensor yp = packed.apply(v);
        CHECK(max_rel_error(yp, yf) <= 1e-12);
    }
}

TEST_CASE("naive oracle basics")
{
    GeneratorSpec g = random_generator(Shape{2, 3}, 3, 1.0, Symmetry::general);
    ComplexTensor zero(Shape{2, 3});
    ComplexTensor y = naive_matvec(g, zero);
    CHECK(max_abs(y) == 0.0);

    CHECK_THROWS_AS(naive_matvec(g, zero, 5), CapExceededError);
    CHECK_THROWS_AS(dense_toeplitz_matrix(g, 5), CapExceededError);

    ComplexTensor wrong(Shape{3, 2});
    CHECK_THROWS_AS(naive_matvec(g, wrong), ShapeError);
}

TEST_CASE("symmetric generator has a symmetric dense matrix")
{
    GeneratorSpec g = random_generator(Shape{3, 4}, 19, 1.0, Symmetry::symmetric);
    const std::int64_t s = g.vector_size();
    std::vector<cplx> mat = dense_toeplitz_matrix(g);
    for (std::int64_t j = 0; j < s; ++j)
        for (std::int64_t k = 0; k < s; ++k)
            CHECK(mat[static_cast<std::size_t>(j * s + k)] ==
                  mat[static_cast<std::size_t>(k * s + j)]);
}

TEST_CASE("skew generator has a skew dense matrix")
{
    GeneratorSpec g = random_generator(Shape{4}, 20, 1.0, Symmetry::skew);
    const std::int64_t s = g.vector_size();
    std::vector<cplx> mat = dense_toeplitz_matrix(g);
    for (std::int64_t j = 0; j < s; ++j)
        for (std::int64_t k = 0; k < s; ++k)
            CHECK(mat[static_cast<std::size_t>(j * s + k)] ==
                  -mat[static_cast<std::size_t>(k * s + j)]);
}

TEST_SUITE_END();
