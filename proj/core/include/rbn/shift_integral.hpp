#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "rbn/drift.hpp"
#include "rbn/funcspace.hpp"
#include "rbn/spectral.hpp"

namespace rbn {

/// Dyadic time window [k 2^-n, (k+1) 2^-n].
struct DyadicWindow {
    unsigned n = 1;
    unsigned k = 0;
};

/// Quadrature value of the windowed shift-difference integral
///   int_{k 2^-n}^{(k+1) 2^-n} b(s, Z_s + x) - b(s, Z_s + y) ds
/// by the left-endpoint Riemann rule on the path's native grid. Exact whenever
/// the integrand is constant per subinterval; the used resolution is reported
/// rather than hidden.
struct ShiftIntegral {
    Vec vector;
    double h_norm = 0.0;
    std::size_t subnodes = 0;
    const char* rule = "left-riemann";
};

/// One-argument form (y = 0): shift_integral(drift, path, w, x, zero).
ShiftIntegral shift_integral(const DriftSpec& drift, const OUPath& path, DyadicWindow w,
                             std::span<const double> x, std::span<const double> y,
                             unsigned quadrature_min = 16);

ShiftIntegral shift_integral(const DriftSpec& drift, const OUPath& path, DyadicWindow w,
                             std::span<const double> x, unsigned quadrature_min = 16);

/// Left-endpoint Riemann sum of b(s, Z_s + h(s)) over grid nodes in [a, b).
Vec shifted_path_integral(const DriftSpec& drift, const OUPath& path, const PathFunction& h,
                          double a, double b);

struct PseudometricReport {
    std::size_t triples = 0;
    std::size_t identity_violations = 0; // |phi(x,x)| != 0
    std::size_t symmetry_violations = 0; // |phi(x,y)| != |phi(y,x)|
    std::size_t triangle_violations = 0; // beyond eps_quad
    double worst_triangle_excess = 0.0;
};

/// Checks the pseudometric structure of (x, y) |-> |integral|_H on a fixed
/// path: identity at equal arguments, symmetry, and the triangle inequality up
/// to quadrature slack eps_quad.
PseudometricReport pseudometric_check(const DriftSpec& drift, const OUPath& path, DyadicWindow w,
                                      std::span<const std::array<Vec, 3>> triples, double eps_quad,
                                      unsigned quadrature_min = 16);

} // namespace rbn
