#include <doctest.h>

#include <cmath>

#include "core/instance.hpp"

using namespace toesplit;

TEST_SUITE_BEGIN("instance");

TEST_CASE("instances are deterministic in the seed")
{
    const Shape levels{3, 4};
    GeneratorSpec a = random_generator(levels, 99, 2.0, Symmetry::general);
    GeneratorSpec b = random_generator(levels, 99, 2.0, Symmetry::general);
    for (std::int64_t i = 0; i < a.lags().size(); ++i)
        CHECK(a.lags()[i] == b.lags()[i]);

    ComplexTensor va = random_vector(levels, 99, 2.0);
    ComplexTensor vb = random_vector(levels, 99, 2.0);
    for (std::int64_t i = 0; i < va.size(); ++i)
        CHECK(va[i] == vb[i]);

    GeneratorSpec c = random_generator(levels, 100, 2.0, Symmetry::general);
    CHECK(a.lags()[0] != c.lags()[0]);
}

TEST_CASE("lag and vector streams are independent roles")
{
    const Shape levels{4};
    GeneratorSpec g = random_generator(levels, 1, 1.0, Symmetry::general);
    ComplexTensor v = random_vector(levels, 1, 1.0);
    // same seed, different role: first draws differ
    CHECK(g.lags()[0] != v[0]);
}

TEST_CASE("symmetrized modes pass construction validation")
{
    for (auto sym : {Symmetry::symmetric, Symmetry::skew})
        for (const Shape& levels : {Shape{5}, Shape{2, 4}, Shape{3, 2, 2}})
            CHECK_NOTHROW(random_generator(levels, 7, 1.0, sym));
}

TEST_CASE("skew instances have exactly zero coefficients on zero lags")
{
    GeneratorSpec g = random_generator(Shape{3, 3}, 13, 1.0, Symmetry::skew);
    // the whole t_{0,m} and t_{m,0} planes vanish
    for (std::int64_t i = 0; i < 5; ++i) {
        std::vector<std::int64_t> row{0, i - 2};
        std::vector<std::int64_t> col{i - 2, 0};
        CHECK(g.lag(row) == cplx{0.0, 0.0});
        CHECK(g.lag(col) == cplx{0.0, 0.0});
    }
}

TEST_CASE("draws have the requested mean and variance")
{
    const std::size_t N = 100000;
    const double variance = 2.5;
    GaussianStream gauss(seeded_stream(12345, 0), variance);
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        const double x = gauss.next();
        sum += x;
        sumsq += x * x;
    }
    const double mean = sum / static_cast<double>(N);
    const double var = sumsq / static_cast<double>(N) - mean * mean;
    const double sigma = std::sqrt(variance);
    CHECK(std::abs(mean) <= 5.0 * sigma / std::sqrt(static_cast<double>(N)));
    CHECK(var == doctest::Approx(variance).epsilon(0.05));
}

TEST_CASE("zero variance is the all-zero instance, negative variance is rejected")
{
    ComplexTensor v = random_vector(Shape{4}, 1, 0.0);
    CHECK(max_abs(v) == 0.0);
    GeneratorSpec g = random_generator(Shape{4}, 1, 0.0, Symmetry::general);
    CHECK(max_abs(g.lags()) == 0.0);

    CHECK_THROWS_AS(random_vector(Shape{4}, 1, -1.0), std::invalid_argument);
}

TEST_SUITE_END();
