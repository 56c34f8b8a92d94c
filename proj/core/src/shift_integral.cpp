#include "rbn/shift_integral.hpp"

#include <cmath>
#include <stdexcept>

namespace rbn {

namespace {

void check_window(const OUPath& path, DyadicWindow w, unsigned quadrature_min, std::size_t& first,
                  std::size_t& count) {
    if (w.n < 1) throw std::invalid_argument("shift_integral: window level must be >= 1");
    if (w.k >= (std::uint64_t{1} << w.n))
        throw std::invalid_argument("shift_integral: window index out of range");
    const std::size_t stride = path.grid.dyadic_stride(w.n);
    if (stride < quadrature_min)
        throw std::invalid_argument("shift_integral: grid does not meet the quadrature minimum");
    first = static_cast<std::size_t>(w.k) * stride;
    count = stride;
}

} // namespace

ShiftIntegral shift_integral(const DriftSpec& drift, const OUPath& path, DyadicWindow w,
                             std::span<const double> x, std::span<const double> y,
                             unsigned quadrature_min) {
    if (x.size() != path.modes || y.size() != path.modes)
        throw std::invalid_argument("shift_integral: dimension mismatch");
    std::size_t first = 0, count = 0;
    check_window(path, w, quadrature_min, first, count);

    const double dt = path.grid.dt();
    ShiftIntegral out;
    out.vector.assign(path.modes, 0.0);
    out.subnodes = count;
    Vec shifted(path.modes);
    for (std::size_t j = 0; j < count; ++j) {
        const std::size_t node = first + j;
        const double t = path.grid.node(node);
        const auto z = path.node_values(node);
        for (std::size_t m = 0; m < path.modes; ++m) shifted[m] = z[m] + x[m];
        const Vec fx = drift.evaluate(t, shifted);
        for (std::size_t m = 0; m < path.modes; ++m) shifted[m] = z[m] + y[m];
        const Vec fy = drift.evaluate(t, shifted);
        for (std::size_t m = 0; m < path.modes; ++m) out.vector[m] += dt * (fx[m] - fy[m]);
    }
    out.h_norm = h_norm(out.vector);
    return out;
}

ShiftIntegral shift_integral(const DriftSpec& drift, const OUPath& path, DyadicWindow w,
                             std::span<const double> x, unsigned quadrature_min) {
    const Vec zero(path.modes, 0.0);
    return shift_integral(drift, path, w, x, zero, quadrature_min);
}

Vec shifted_path_integral(const DriftSpec& drift, const OUPath& path, const PathFunction& h,
                          double a, double b) {
    if (!(path.grid == h.grid)) throw std::invalid_argument("shifted_path_integral: grid mismatch");
    if (h.modes != path.modes) throw std::invalid_argument("shifted_path_integral: dimension mismatch");
    if (!(a <= b) || a < 0.0 || b > path.grid.horizon())
        throw std::invalid_argument("shifted_path_integral: invalid interval");

    const double dt = path.grid.dt();
    Vec out(path.modes, 0.0);
    Vec shifted(path.modes);
    for (std::size_t node = 0; node < path.grid.nodes(); ++node) {
        const double t = path.grid.node(node);
        if (t < a || t >= b) continue;
        const auto z = path.node_values(node);
        const auto hv = h.node_values(node);
        for (std::size_t m = 0; m < path.modes; ++m) shifted[m] = z[m] + hv[m];
        const Vec f = drift.evaluate(t, shifted);
        for (std::size_t m = 0; m < path.modes; ++m) out[m] += dt * f[m];
    }
    return out;
}

PseudometricReport pseudometric_check(const DriftSpec& drift, const OUPath& path, DyadicWindow w,
                                      std::span<const std::array<Vec, 3>> triples, double eps_quad,
                                      unsigned quadrature_min) {
    PseudometricReport report;
    for (const auto& triple : triples) {
        const Vec& x = triple[0];
        const Vec& y = triple[1];
        const Vec& z = triple[2];
        const double dxx = shift_integral(drift, path, w, x, x, quadrature_min).h_norm;
        const double dxy = shift_integral(drift, path, w, x, y, quadrature_min).h_norm;
        const double dyx = shift_integral(drift, path, w, y, x, quadrature_min).h_norm;
        const double dyz = shift_integral(drift, path, w, y, z, quadrature_min).h_norm;
        const double dxz = shift_integral(drift, path, w, x, z, quadrature_min).h_norm;
        ++report.triples;
        if (dxx != 0.0) ++report.identity_violations;
        if (dxy != dyx) ++report.symmetry_violations;
        const double excess = dxz - (dxy + dyz);
        if (excess > eps_quad) {
            ++report.triangle_violations;
            report.worst_triangle_excess = std::max(report.worst_triangle_excess, excess);
        }
    }
    return report;
}

} // namespace rbn
