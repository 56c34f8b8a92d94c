#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "rbn/spectral.hpp"

using namespace rbn;

TEST_CASE("semigroup closed forms") {
    SpectralOperator op({1.0, 2.0});
    const Vec x{1.0, 1.0};

    SUBCASE("t = 0 is the identity") {
        const Vec y = semigroup_apply(op, 0.0, x);
        CHECK(y[0] == 1.0);
        CHECK(y[1] == 1.0);
    }
    SUBCASE("t = ln 2 halves and quarters") {
        const Vec y = semigroup_apply(op, std::log(2.0), x);
        CHECK(y[0] == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(y[1] == doctest::Approx(0.25).epsilon(1e-15));
    }
    SUBCASE("long-time decay is monotone to zero") {
        SpectralOperator scalar({1.0});
        double prev = 1.0;
        for (double t : {10.0, 50.0, 100.0}) {
            const double v = semigroup_apply(scalar, t, Vec{1.0})[0];
            CHECK(v < prev);
            prev = v;
        }
        CHECK(semigroup_apply(scalar, 100.0, Vec{1.0})[0] < 1e-43);
    }
    SUBCASE("negative t rejected") {
        CHECK_THROWS_AS(semigroup_apply(op, -1e-9, x), std::invalid_argument);
    }
}

TEST_CASE("semigroup property: s then t equals s + t within rounding") {
    SpectralOperator op({0.5, 1.0, 4.0});
    const Vec x{0.3, -2.0, 7.0};
    for (double s : {0.1, 0.7}) {
        for (double t : {0.25, 1.5}) {
            const Vec two_step = semigroup_apply(op, s, semigroup_apply(op, t, x));
            const Vec one_step = semigroup_apply(op, s + t, x);
            for (std::size_t n = 0; n < x.size(); ++n)
                CHECK(two_step[n] == doctest::Approx(one_step[n]).epsilon(1e-14));
        }
    }
}

TEST_CASE("stationary variance formula") {
    SpectralOperator op({0.5, 1.0, 2.0});
    CHECK(stationary_variance(op, 1) == 1.0);
    CHECK(stationary_variance(op, 2) == 0.5);
    CHECK(stationary_variance(op, 3) == 0.25);
    CHECK_THROWS_AS(stationary_variance(op, 0), std::out_of_range);
    CHECK_THROWS_AS(stationary_variance(op, 4), std::out_of_range);
}

TEST_CASE("zero-variance debug mode gives the zero path") {
    SpectralOperator op({1.0, 3.0});
    TimeGrid grid(1.0, 64);
    const OUPath path = simulate_ou(op, grid, 9, 0, NoiseMode::zero_variance);
    for (double v : path.coeff) CHECK(v == 0.0);
}

TEST_CASE("paths start at zero and are bit-deterministic") {
    SpectralOperator op({1.0, 2.0, 3.0});
    TimeGrid grid(1.0, 32);
    const OUPath a = simulate_ou(op, grid, 123, 7);
    const OUPath b = simulate_ou(op, grid, 123, 7);
    CHECK(a.coeff == b.coeff);
    for (std::size_t n = 0; n < op.dim(); ++n) CHECK(a.at(0, n) == 0.0);
    const OUPath c = simulate_ou(op, grid, 123, 8);
    CHECK(a.coeff != c.coeff);
}

TEST_CASE("marginal variance matches the closed form (lambda = 2, t = 1)") {
    // oracle: (1 - e^{-2 lambda t}) / (2 lambda)
    const double expected = (1.0 - std::exp(-4.0)) / 4.0;
    SpectralOperator op({2.0});
    const int replicas = 100000;
    double sum = 0.0, sum2 = 0.0;
    for (int rep = 0; rep < replicas; ++rep) {
        const double z = ou_marginal(op, 1.0, 2024, rep)[0];
        sum += z;
        sum2 += z * z;
    }
    const double mean = sum / replicas;
    const double var = sum2 / replicas - mean * mean;
    const double se = expected * std::sqrt(2.0 / (replicas - 1));
    CHECK(std::abs(var - expected) < 4.0 * se);
}

TEST_CASE("one step vs many sub-steps: same first two moments") {
    SpectralOperator op({2.0});
    TimeGrid one(1.0, 1);
    TimeGrid many(1.0, 8);
    const int replicas = 100000;
    double m1 = 0, v1 = 0, m8 = 0, v8 = 0;
    for (int rep = 0; rep < replicas; ++rep) {
        const double a = simulate_ou(op, one, 5, rep).at(1, 0);
        const double b = simulate_ou(op, many, 77, rep).at(8, 0);
        m1 += a;
        v1 += a * a;
        m8 += b;
        v8 += b * b;
    }
    m1 /= replicas;
    m8 /= replicas;
    v1 = v1 / replicas - m1 * m1;
    v8 = v8 / replicas - m8 * m8;
    const double expected = (1.0 - std::exp(-4.0)) / 4.0;
    const double se_mean = std::sqrt(expected / replicas);
    const double se_var = expected * std::sqrt(2.0 / (replicas - 1));
    CHECK(std::abs(m1 - m8) < 8.0 * se_mean); // difference of two means, 4 sigma each
    CHECK(std::abs(v1 - expected) < 4.0 * se_var);
    CHECK(std::abs(v8 - expected) < 4.0 * se_var);
}

TEST_CASE("modes are uncorrelated at fixed t") {
    SpectralOperator op({1.0, 2.0, 4.0});
    TimeGrid grid(1.0, 4);
    const int replicas = 20000;
    double c01 = 0, c02 = 0, c12 = 0;
    double v0 = 0, v1 = 0, v2 = 0;
    for (int rep = 0; rep < replicas; ++rep) {
        const OUPath p = simulate_ou(op, grid, 31, rep);
        const double a = p.at(4, 0), b = p.at(4, 1), c = p.at(4, 2);
        c01 += a * b;
        c02 += a * c;
        c12 += b * c;
        v0 += a * a;
        v1 += b * b;
        v2 += c * c;
    }
    const double bound = 4.0 / std::sqrt(static_cast<double>(replicas));
    CHECK(std::abs(c01 / replicas / std::sqrt(v0 / replicas * v1 / replicas)) < bound);
    CHECK(std::abs(c02 / replicas / std::sqrt(v0 / replicas * v2 / replicas)) < bound);
    CHECK(std::abs(c12 / replicas / std::sqrt(v1 / replicas * v2 / replicas)) < bound);
}

TEST_CASE("grid invariants") {
    CHECK_THROWS_AS(TimeGrid(1.5, 8), std::invalid_argument);  // horizon hard-limited to 1
    CHECK_THROWS_AS(TimeGrid(0.0, 8), std::invalid_argument);
    CHECK_THROWS_AS(TimeGrid(1.0, 0), std::invalid_argument);
    TimeGrid g(1.0, 64);
    CHECK(g.dyadic_stride(3) == 8);
    CHECK_THROWS_AS(g.dyadic_stride(7), std::invalid_argument);
}

TEST_CASE("operator validation and advisory") {
    CHECK_THROWS_AS(SpectralOperator({1.0, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(SpectralOperator({-1.0}), std::invalid_argument);
    CHECK_THROWS_AS(SpectralOperator(std::vector<double>{}), std::invalid_argument);
    CHECK(SpectralOperator::power_law(8, 2.0).slow_growth_advisory() == false);
    CHECK(SpectralOperator::power_law(8, 0.5).slow_growth_advisory() == true);
}

TEST_CASE("subsample keeps shared nodes bitwise") {
    SpectralOperator op({1.0, 2.0});
    TimeGrid grid(1.0, 64);
    const OUPath fine = simulate_ou(op, grid, 8, 3);
    const OUPath coarse = fine.subsample(4);
    CHECK(coarse.grid.steps() == 16);
    for (std::size_t i = 0; i <= 16; ++i)
        for (std::size_t n = 0; n < 2; ++n) CHECK(coarse.at(i, n) == fine.at(4 * i, n));
}
