#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "rbn/rng.hpp"
#include "rbn/shift_integral.hpp"

using namespace rbn;

namespace {

SpectralOperator small_op() { return SpectralOperator({1.0, 2.0, 4.0}); }

OUPath test_path(const SpectralOperator& op, unsigned max_level, std::uint64_t seed) {
    const TimeGrid grid(1.0, std::size_t{16} << max_level);
    return simulate_ou(op, grid, seed, 0);
}

} // namespace

TEST_CASE("trivial closed forms") {
    const SpectralOperator op = small_op();
    const OUPath path = test_path(op, 4, 1);

    SUBCASE("x = y gives the zero vector") {
        const Vec x{0.01, -0.02, 0.005};
        const auto r = shift_integral(DriftSpec::make(DriftFamily::sign, Vec(3, 0.1)), path,
                                      DyadicWindow{3, 2}, x, x);
        for (double v : r.vector) CHECK(v == 0.0);
        CHECK(r.h_norm == 0.0);
    }
    SUBCASE("space-constant drift cancels for any x, y") {
        const auto r = shift_integral(DriftSpec::make(DriftFamily::constant, Vec(3, 0.7)), path,
                                      DyadicWindow{2, 1}, Vec{0.1, 0.0, 0.0}, Vec{-0.1, 0.2, 0.0});
        for (double v : r.vector) CHECK(v == 0.0);
    }
    SUBCASE("linear-test drift gives exactly 2^-n (x - y)") {
        const Vec x{0.25, -0.5, 0.125};
        const Vec y{0.0, 0.25, 0.125};
        for (unsigned n : {1u, 3u, 4u}) {
            const auto r = shift_integral(DriftSpec::make(DriftFamily::linear_test, Vec(3, 1.0)),
                                          path, DyadicWindow{n, 0}, x, y);
            const double w = std::exp2(-static_cast<double>(n));
            for (std::size_t m = 0; m < 3; ++m) CHECK(r.vector[m] == w * (x[m] - y[m]));
        }
    }
}

TEST_CASE("window bookkeeping") {
    const SpectralOperator op = small_op();
    const OUPath path = test_path(op, 4, 2);
    const DriftSpec drift = DriftSpec::make(DriftFamily::zero, Vec(3, 0.0));
    CHECK_THROWS_AS(shift_integral(drift, path, DyadicWindow{9, 0}, Vec(3, 0.0), Vec(3, 0.0)),
                    std::invalid_argument); // < 16 subnodes at level 9
    CHECK_THROWS_AS(shift_integral(drift, path, DyadicWindow{2, 4}, Vec(3, 0.0), Vec(3, 0.0)),
                    std::invalid_argument); // k out of range
    const auto r = shift_integral(drift, path, DyadicWindow{4, 15}, Vec(3, 0.0), Vec(3, 0.0));
    CHECK(r.subnodes == 16);
    CHECK(std::string(r.rule) == "left-riemann");
}

TEST_CASE("deterministic Lipschitz bound holds pathwise") {
    // |integral|_H <= L 2^-n |x - y|_H with L = max component scale of the sin family
    const SpectralOperator op = small_op();
    const OUPath path = test_path(op, 6, 3);
    const double L = 0.5;
    const DriftSpec drift = DriftSpec::make(DriftFamily::lipschitz, Vec(3, L));
    for (unsigned n : {2u, 4u, 6u}) {
        for (unsigned k : {0u, (1u << n) - 1}) {
            for (std::uint64_t s = 0; s < 20; ++s) {
                Vec x(3), y(3);
                for (std::size_t m = 0; m < 3; ++m) {
                    x[m] = uniform_sym(11, StreamDomain::scan_points, s, m, 0);
                    y[m] = uniform_sym(11, StreamDomain::scan_points, s, m + 3, 0);
                }
                const auto r = shift_integral(drift, path, DyadicWindow{n, k}, x, y);
                Vec diff(3);
                for (std::size_t m = 0; m < 3; ++m) diff[m] = x[m] - y[m];
                CHECK(r.h_norm <=
                      L * std::exp2(-static_cast<double>(n)) * h_norm(diff) * (1.0 + 1e-12));
            }
        }
    }
}

TEST_CASE("boundedness: |integral| <= 2 * 2^-n * sup|b|") {
    const SpectralOperator op = small_op();
    const OUPath path = test_path(op, 5, 4);
    const DriftSpec drift = DriftSpec::make(DriftFamily::sign, Vec(3, 0.2));
    const double sup_b = h_norm(Vec(3, 0.2));
    for (unsigned n : {1u, 3u, 5u}) {
        const auto r = shift_integral(drift, path, DyadicWindow{n, 0}, Vec{0.6, -0.6, 0.6},
                                      Vec{-0.6, 0.6, -0.6});
        CHECK(r.h_norm <= 2.0 * std::exp2(-static_cast<double>(n)) * sup_b * (1.0 + 1e-12));
    }
}

TEST_CASE("quadrature refinement: doubling subnodes moves sign-drift values only slightly") {
    const SpectralOperator op = small_op();
    const DriftSpec drift = DriftSpec::make(DriftFamily::sign, Vec(3, 0.1));
    const TimeGrid coarse(1.0, 16 << 3);
    const TimeGrid fine(1.0, 32 << 3);
    const OUPath path_fine = simulate_ou(op, fine, 9, 0);
    const OUPath path_coarse = path_fine.subsample(2);
    const Vec x{0.05, 0.0, -0.03};
    double total_change = 0.0;
    for (unsigned k = 0; k < 8; ++k) {
        const auto a = shift_integral(drift, path_coarse, DyadicWindow{3, k}, x);
        const auto b = shift_integral(drift, path_fine, DyadicWindow{3, k}, x);
        total_change += std::abs(a.h_norm - b.h_norm);
    }
    // tracked, not asserted pathwise: order-of-magnitude sanity only
    CHECK(total_change <= 2.0 * 0.1 * std::sqrt(3.0));
}

TEST_CASE("path-functional decomposition against the window integral") {
    // With h == x constant: int b(s, Z+h) - int b(s, Z) over the window equals
    // the one-argument window integral (same quadrature nodes, bitwise).
    const SpectralOperator op = small_op();
    const OUPath path = test_path(op, 3, 5);
    const DriftSpec drift = DriftSpec::make(DriftFamily::sign, Vec(3, 0.1));
    const Vec x{0.04, -0.02, 0.01};
    PathFunction hx = PathFunction::zero(path.grid, 3);
    for (std::size_t i = 0; i < path.grid.nodes(); ++i)
        for (std::size_t m = 0; m < 3; ++m) hx.values[i * 3 + m] = x[m];
    const PathFunction h0 = PathFunction::zero(path.grid, 3);

    for (unsigned k : {0u, 5u}) {
        const double a = k * std::exp2(-3.0);
        const double b = (k + 1) * std::exp2(-3.0);
        const Vec with_shift = shifted_path_integral(drift, path, hx, a, b);
        const Vec base = shifted_path_integral(drift, path, h0, a, b);
        const auto direct = shift_integral(drift, path, DyadicWindow{3, k}, x);
        for (std::size_t m = 0; m < 3; ++m)
            CHECK(with_shift[m] - base[m] == doctest::Approx(direct.vector[m]).epsilon(1e-15));
    }
}

TEST_CASE("path functional closed forms") {
    const SpectralOperator op = small_op();
    const OUPath path = test_path(op, 3, 6);
    SUBCASE("zero drift integrates to zero") {
        const PathFunction h = PathFunction::zero(path.grid, 3);
        const Vec v = shifted_path_integral(DriftSpec::make(DriftFamily::zero, Vec(3, 0.0)), path, h,
                                            0.0, 1.0);
        for (double c : v) CHECK(c == 0.0);
    }
    SUBCASE("constant drift integrates to c (b - a)") {
        const PathFunction h = PathFunction::zero(path.grid, 3);
        const DriftSpec drift = DriftSpec::make(DriftFamily::constant, Vec(3, 0.25));
        const Vec v = shifted_path_integral(drift, path, h, 0.0, 1.0);
        for (double c : v) CHECK(c == doctest::Approx(0.25).epsilon(1e-12));
        const Vec half = shifted_path_integral(drift, path, h, 0.25, 0.75);
        for (double c : half) CHECK(c == doctest::Approx(0.125).epsilon(1e-12));
    }
}

TEST_CASE("pseudometric structure on a fixed path") {
    const SpectralOperator op = small_op();
    const OUPath path = test_path(op, 4, 7);
    const DriftSpec drift = DriftSpec::make(DriftFamily::sign, Vec(3, 0.1));

    SUBCASE("degenerate triples are exact") {
        const Vec x{0.03, -0.01, 0.0};
        std::vector<std::array<Vec, 3>> triples{{x, x, x}};
        const auto rep = pseudometric_check(drift, path, DyadicWindow{3, 1}, triples, 0.0);
        CHECK(rep.identity_violations == 0);
        CHECK(rep.symmetry_violations == 0);
        CHECK(rep.triangle_violations == 0);
    }
    SUBCASE("random triples satisfy all axioms within quadrature slack") {
        std::vector<std::array<Vec, 3>> triples;
        for (std::uint64_t s = 0; s < 1000; ++s) {
            std::array<Vec, 3> t{Vec(3), Vec(3), Vec(3)};
            for (int which = 0; which < 3; ++which)
                for (std::size_t m = 0; m < 3; ++m)
                    t[which][m] = 0.26 * uniform_sym(13, StreamDomain::scan_points, s, which * 3 + m, 5);
            triples.push_back(std::move(t));
        }
        for (unsigned n : {2u, 4u}) {
            const double eps = 1e-12 * std::exp2(-static_cast<double>(n));
            const auto rep =
                pseudometric_check(drift, path, DyadicWindow{n, (1u << n) - 1}, triples, eps);
            CHECK(rep.triples == 1000);
            CHECK(rep.identity_violations == 0);
            CHECK(rep.symmetry_violations == 0);
            CHECK(rep.triangle_violations == 0);
        }
    }
}
