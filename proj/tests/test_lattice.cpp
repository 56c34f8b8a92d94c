#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "rbn/lattice.hpp"

using namespace rbn;

namespace {

// Independent oracle: scan component bounds in log space directly from the
// definition, without going through max_coord.
unsigned effdim_oracle(double gamma, unsigned r, unsigned m, unsigned scale) {
    unsigned last = 0;
    for (unsigned n = 1; n <= 32; ++n) {
        const double decay_log = std::log(2.0) - std::exp(std::pow(static_cast<double>(n), gamma));
        const double radius_log = std::log(2.0) - r * std::log(2.0);
        const double bound_log = std::log(static_cast<double>(scale)) + std::min(decay_log, radius_log);
        if (bound_log >= -static_cast<double>(m) * std::log(2.0))
            last = n;
        else
            break;
    }
    return last + 1;
}

// Independent per-component integer-range product for the lattice size.
double count_oracle(const QDescriptor& q, unsigned m) {
    double total = 1.0;
    for (unsigned n = 1; n <= 32; ++n) {
        long long k = 0;
        while (true) {
            const double lhs = std::log(static_cast<double>(k + 1)) - m * std::log(2.0);
            if (lhs <= box_bound_log(q, n))
                ++k;
            else
                break;
        }
        if (k == 0) break;
        total *= static_cast<double>(2 * k + 1);
    }
    return total;
}

} // namespace

TEST_CASE("component bound logs match hand values") {
    // gamma=1, n=1: ln 2 - e
    CHECK(component_bound_log(1.0, 1) == doctest::Approx(std::log(2.0) - std::exp(1.0)).epsilon(1e-15));
    CHECK(component_bound_log(1.0, 1) == doctest::Approx(-2.02513).epsilon(1e-5));
    // gamma=2, n=1: identical because 1^gamma = 1
    CHECK(component_bound_log(2.0, 1) == component_bound_log(1.0, 1));
    // gamma=1, n=2: ln 2 - e^2 (independent arithmetic)
    CHECK(component_bound_log(1.0, 2) == doctest::Approx(0.6931471805599453 - 7.38905609893065).epsilon(1e-14));
    CHECK(component_bound_log(1.0, 2) == doctest::Approx(-6.69591).epsilon(1e-5));
}

TEST_CASE("effective dimension brute force vs oracle scan") {
    CHECK(effective_dimension(QDescriptor(1.0, 0), 10) == 3);
    CHECK(effective_dimension(QDescriptor(1.0, 0), 2) == 1); // lattice is {0}
    CHECK(effective_dimension(QDescriptor(7.0, 0), 3) == 2);
    for (double gamma : {1.0, 2.0, 7.0})
        for (unsigned r : {0u, 1u, 2u})
            for (unsigned m = r; m <= 14; ++m)
                for (unsigned scale : {1u, 2u})
                    CHECK(effective_dimension(QDescriptor(gamma, r, scale), m) ==
                          effdim_oracle(gamma, r, m, scale));
    CHECK_THROWS_AS(effective_dimension(QDescriptor(1.0, 3), 2), std::invalid_argument);
}

TEST_CASE("effdim closed-form bound") {
    CHECK(effdim_bound(1.0, 10) == 3);  // ceil(ln 11) = 3
    CHECK(effdim_bound(7.0, 3) == 2);   // ceil((ln 4)^{1/7}) = 2
    CHECK(effdim_bound(1.0, 0) == 1);   // ln 1 = 0, reported as max(1, .)
    // brute force <= ceiling bound over the acceptance grid
    for (double gamma : {1.0, 2.0, 7.0})
        for (unsigned r : {0u, 1u, 2u})
            for (unsigned m = r; m <= 14; ++m)
                CHECK(effective_dimension(QDescriptor(gamma, r), m) <= effdim_bound(gamma, m));
}

TEST_CASE("lattice enumeration matches frozen counts and the product oracle") {
    SUBCASE("degenerate lattice, origin only") {
        const auto pts = enumerate_lattice(QDescriptor(1.0, 0), 2);
        CHECK(pts.size() == 1);
        CHECK(pts[0].coords.empty());
    }
    SUBCASE("gamma=1, m=10: (2*135+1)(2*1+1) = 813") {
        const QDescriptor q(1.0, 0);
        CHECK(max_coord(q, 10, 1) == 135);
        CHECK(max_coord(q, 10, 2) == 1);
        CHECK(max_coord(q, 10, 3) == 0);
        const auto pts = enumerate_lattice(q, 10);
        CHECK(pts.size() == 813);
        CHECK(lattice_count(q, 10) == 813.0);
        CHECK(count_oracle(q, 10) == 813.0);
    }
    SUBCASE("counts stay below the counting bound") {
        for (double gamma : {1.0, 2.0, 7.0})
            for (unsigned r : {0u, 1u, 2u})
                for (unsigned m = r; m <= 10; ++m) {
                    const QDescriptor q(gamma, r);
                    const double count = lattice_count(q, m);
                    CHECK(count == count_oracle(q, m));
                    CHECK(std::log(count) <= count_bound_log(q, m) + 1e-12);
                }
    }
    SUBCASE("budget refusal carries the predicted count") {
        const QDescriptor q(1.0, 0);
        CHECK_THROWS_AS(enumerate_lattice(q, 10, 100), BudgetExceeded);
        try {
            enumerate_lattice(q, 10, 100);
        } catch (const BudgetExceeded& e) {
            CHECK(e.predicted == 813.0);
            CHECK(e.budget == 100);
        }
    }
}

TEST_CASE("norm equivalence on enumerated lattice points") {
    // |x|_2 <= sqrt(d) |x|_inf and |x|_inf <= |x|_2
    const QDescriptor q(1.0, 0);
    const unsigned m = 6;
    const double d = effective_dimension(q, m);
    for (const LatticePoint& p : enumerate_lattice(q, m)) {
        const Vec x = p.to_vector(4);
        const double inf = sup_norm(x);
        const double two = h_norm(x);
        CHECK(two <= std::sqrt(d) * inf + 1e-15);
        CHECK(inf <= two + 1e-15);
    }
}

TEST_CASE("projection closed forms") {
    const QDescriptor q(1.0, 0);
    SUBCASE("origin is fixed") {
        const Vec x{0.0, 0.0};
        const LatticePoint p = project(q, 10, x);
        for (long long c : p.coords) CHECK(c == 0);
    }
    SUBCASE("scalar rounding example: 0.1005 at m=10 gives k=103") {
        const Vec x{0.1005, 0.0};
        const LatticePoint p = project(q, 10, x);
        REQUIRE(p.coords.size() == 1);
        CHECK(p.coords[0] == 103);
    }
    SUBCASE("lattice points are fixed (idempotence)") {
        for (const LatticePoint& p : enumerate_lattice(q, 5)) {
            const Vec x = p.to_vector(3);
            const LatticePoint again = project(q, 5, x);
            CHECK(again.coords == p.coords);
        }
    }
    SUBCASE("outside point rejected with the violating component") {
        const Vec x{0.5, 0.0}; // above 2 e^{-e} ~ 0.132
        CHECK_THROWS_AS(project(q, 10, x), OutsideDomain);
        try {
            project(q, 10, x);
        } catch (const OutsideDomain& e) {
            CHECK(e.component == 1);
        }
    }
}

TEST_CASE("projection is 2^-m close and exhaustively optimal on small lattices") {
    const QDescriptor q(1.0, 0);
    for (unsigned m : {4u, 6u}) {
        const auto lattice = enumerate_lattice(q, m);
        REQUIRE(lattice.size() <= 10000);
        const double mesh = std::exp2(-static_cast<double>(m));
        // sample points inside Q by shrinking lattice points and nudging
        for (std::size_t i = 0; i < lattice.size(); i += 3) {
            Vec x = lattice[i].to_vector(3);
            for (double& v : x) v *= 0.9;
            const LatticePoint p = project(q, m, x);
            const Vec px = p.to_vector(3);
            double dist = 0.0;
            for (std::size_t c = 0; c < x.size(); ++c) dist = std::max(dist, std::abs(x[c] - px[c]));
            CHECK(dist <= mesh + 1e-15);
            for (const LatticePoint& other : lattice) {
                const Vec ox = other.to_vector(3);
                double odist = 0.0;
                for (std::size_t c = 0; c < x.size(); ++c)
                    odist = std::max(odist, std::abs(x[c] - ox[c]));
                CHECK(odist >= dist - 1e-15); // none strictly closer
            }
        }
    }
}

TEST_CASE("log-subadditivity spot checks and boundary cases") {
    // r=0: equality
    CHECK(check_log_subadditivity(1.0, 0, 17));
    CHECK(check_log_subadditivity(9.0, 0, 0));
    // r=m=1, gamma=1: ln 3 <= 2 ln 2
    CHECK(check_log_subadditivity(1.0, 1, 1));
    CHECK(std::pow(std::log(3.0), 1.0) <= 2.0 * std::log(2.0));
    // r=5, m=9, gamma=7: direct evaluation of both sides
    const double lhs = std::pow(std::log(15.0), 1.0 / 7.0);
    const double rhs = std::pow(std::log(6.0), 1.0 / 7.0) + std::pow(std::log(10.0), 1.0 / 7.0);
    CHECK(lhs <= rhs);
    CHECK(check_log_subadditivity(7.0, 5, 9));
}
