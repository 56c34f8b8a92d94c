#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "rbn/gronwall.hpp"
#include "rbn/rng.hpp"

using namespace rbn;

namespace {

// Extended-precision replay of the recursion, independent arithmetic path.
long double replay_long_double(double K, unsigned m, double beta0, std::size_t steps) {
    const long double scale = static_cast<long double>(K) * std::exp2l(-static_cast<long double>(m));
    long double beta = beta0;
    for (std::size_t j = 0; j < steps; ++j)
        beta = beta * (1.0L + scale * std::log2l(1.0L / beta));
    return beta;
}

} // namespace

TEST_CASE("degenerate K = 0 keeps the sequence constant") {
    const GronwallSequence seq = run_recursion(0.0, 4, 0.5, 16);
    CHECK(seq.values.size() == 17);
    for (double b : seq.values) CHECK(b == 0.5);
}

TEST_CASE("boundary K = ln(2) 2^m runs without abort") {
    const unsigned m = 4;
    const double K = std::log(2.0) * std::exp2(static_cast<double>(m));
    const GronwallSequence seq = run_recursion(K, m, 0.5, 16);
    CHECK_FALSE(seq.aborted);
    CHECK(seq.values.size() == 17);
}

TEST_CASE("extended-precision replay agrees to 1e-14 relative") {
    const GronwallSequence seq = run_recursion(0.5, 4, 1e-4, 16);
    REQUIRE(seq.values.size() == 17);
    const long double oracle = replay_long_double(0.5, 4, 1e-4, 16);
    const double rel = std::abs(static_cast<double>((seq.values.back() - oracle) / oracle));
    CHECK(rel < 1e-14);
}

TEST_CASE("closed-form cap hand values") {
    // K = 0, beta0 = 2^-e: cap = exp(-e * e^-1) = 1/e
    const double beta0 = std::exp2(-std::exp(1.0));
    CHECK(closed_form_cap(0.0, beta0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK(closed_form_cap(0.0, beta0) == doctest::Approx(0.36788).epsilon(1e-5));
    // beta0 -> 1: cap -> 1
    CHECK(closed_form_cap(3.0, 1.0 - 1e-12) == doctest::Approx(1.0).epsilon(1e-10));
    // K = 0.5, beta0 = 1e-4: long-double oracle via an independent expression
    const long double cap_oracle =
        std::expl(std::log2l(1e-4L) * std::expl(-2.0L * 0.5L - 1.0L));
    CHECK(closed_form_cap(0.5, 1e-4) ==
          doctest::Approx(static_cast<double>(cap_oracle)).epsilon(1e-14));
    CHECK(closed_form_cap(0.5, 1e-4) == doctest::Approx(0.1656).epsilon(1e-3));
}

TEST_CASE("preconditions are named individually") {
    CHECK_THROWS_AS(run_recursion(-1.0, 4, 0.5, 4), std::invalid_argument);
    CHECK_THROWS_AS(run_recursion(100.0, 2, 0.5, 4), std::invalid_argument); // K > ln2 * 2^m
    CHECK_THROWS_AS(run_recursion(0.5, 4, 0.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(run_recursion(0.5, 4, 1.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(run_recursion(0.5, 4, 0.5, 17), std::invalid_argument); // steps > 2^m
}

TEST_CASE("iterates are nondecreasing and capped; cap is monotone") {
    // near the K = ln(2) 2^m boundary the iterates approach 1 and may round to
    // it; that is a reported abort, and the cap bound must hold either way on
    // every produced value
    for (std::uint64_t trial = 0; trial < 1000; ++trial) {
        const unsigned m = 2 + static_cast<unsigned>(
                                   std::floor(13.0 * uniform01(41, StreamDomain::scan_points, trial, 0, 7)));
        const double max_k = std::log(2.0) * std::exp2(static_cast<double>(m));
        const double K = max_k * uniform01(41, StreamDomain::scan_points, trial, 1, 7);
        const double beta0 =
            std::exp(-14.0 * uniform01(41, StreamDomain::scan_points, trial, 2, 7) - 1e-3);
        const std::size_t steps = std::size_t{1} << m;
        const GronwallSequence seq = run_recursion(K, m, beta0, steps);
        const double cap = closed_form_cap(K, beta0);
        double prev = 0.0;
        for (double b : seq.values) {
            CHECK(b >= prev);
            prev = b;
            CHECK(b <= cap * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("moderate K never aborts") {
    for (std::uint64_t trial = 0; trial < 200; ++trial) {
        const unsigned m = 4 + static_cast<unsigned>(
                                   std::floor(11.0 * uniform01(43, StreamDomain::scan_points, trial, 0, 8)));
        const double K = 2.0 * uniform01(43, StreamDomain::scan_points, trial, 1, 8);
        const double beta0 = 1e-6 + 0.9 * uniform01(43, StreamDomain::scan_points, trial, 2, 8);
        const GronwallSequence seq = run_recursion(K, m, beta0, std::size_t{1} << m);
        CHECK_FALSE(seq.aborted);
        CHECK(seq.values.size() == (std::size_t{1} << m) + 1);
    }
}

TEST_CASE("cap is nondecreasing in K and in beta0") {
    double prev = 0.0;
    for (double K : {0.0, 0.1, 0.5, 2.0, 10.0}) {
        const double cap = closed_form_cap(K, 1e-3);
        CHECK(cap >= prev);
        prev = cap;
    }
    prev = 0.0;
    for (double b0 : {1e-8, 1e-4, 1e-2, 0.5, 0.99}) {
        const double cap = closed_form_cap(1.0, b0);
        CHECK(cap >= prev);
        prev = cap;
    }
}
