#include "rbn/funcspace.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rbn/lattice.hpp"
#include "rbn/rng.hpp"

namespace rbn {

PathFunction PathFunction::zero(const TimeGrid& grid, std::size_t modes, PathClass cls) {
    PathFunction h{grid, modes, {}, cls, 0};
    h.values.assign(grid.nodes() * modes, 0.0);
    return h;
}

double PathFunction::sup_distance(const PathFunction& other) const {
    if (!(grid == other.grid) || modes != other.modes)
        throw std::invalid_argument("PathFunction::sup_distance: incompatible paths");
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.nodes(); ++i) {
        double s = 0.0;
        for (std::size_t n = 0; n < modes; ++n) {
            const double d = at(i, n) - other.at(i, n);
            s += d * d;
        }
        worst = std::max(worst, s);
    }
    return std::sqrt(worst);
}

double PathFunction::sup_h_norm() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.nodes(); ++i) worst = std::max(worst, h_norm(node_values(i)));
    return worst;
}

double range_bound_log(double gamma, const SpectralOperator& op, unsigned n) {
    const double lambda = op.lambda(n - 1);
    const double ellipsoid_log = -0.5 * std::log(lambda) - lambda; // ln (lambda e^{2 lambda})^{-1/2}
    return std::min(component_bound_log(gamma, n), ellipsoid_log);
}

namespace {

PathMembership range_violation(std::size_t node, unsigned component, double value) {
    PathMembership m;
    m.pass = false;
    m.reason = "node value outside Q intersect Q^A";
    m.node_a = m.node_b = node;
    m.component = component;
    (void)value;
    return m;
}

} // namespace

PathMembership check_membership(const PathFunction& h, PathClass cls, unsigned level, double gamma,
                                const SpectralOperator& op) {
    PathMembership report;
    if (h.modes != op.dim()) throw std::invalid_argument("check_membership: dimension mismatch");

    // range: every node value in the decay box intersected with the ellipsoid
    for (std::size_t i = 0; i < h.grid.nodes(); ++i) {
        for (std::size_t n = 0; n < h.modes; ++n) {
            const double v = std::abs(h.at(i, n));
            if (v == 0.0) continue;
            if (std::log(v) > range_bound_log(gamma, op, static_cast<unsigned>(n + 1)))
                return range_violation(i, static_cast<unsigned>(n + 1), h.at(i, n));
        }
    }

    if (cls == PathClass::lipschitz) {
        // adjacent nodes suffice: the bound is a metric inequality and chains
        const double dt = h.grid.dt();
        for (std::size_t i = 0; i + 1 < h.grid.nodes(); ++i) {
            double inc = 0.0;
            for (std::size_t n = 0; n < h.modes; ++n)
                inc = std::max(inc, std::abs(h.at(i + 1, n) - h.at(i, n)));
            if (inc > 2.0 * dt * (1.0 + 1e-12)) {
                report.pass = false;
                report.reason = "Lipschitz increment above 2|s-t|";
                report.node_a = i;
                report.node_b = i + 1;
                return report;
            }
        }
    } else if (cls == PathClass::piecewise) {
        const std::size_t stride = h.grid.dyadic_stride(level);
        const std::size_t cells = h.grid.steps() / stride;
        // constancy inside each left-closed cell (the final node belongs to the last cell)
        for (std::size_t c = 0; c < cells; ++c) {
            const std::size_t base = c * stride;
            const std::size_t last = (c + 1 == cells) ? h.grid.steps() : base + stride - 1;
            for (std::size_t i = base + 1; i <= last; ++i) {
                for (std::size_t n = 0; n < h.modes; ++n) {
                    if (h.at(i, n) != h.at(base, n)) {
                        report.pass = false;
                        report.reason = "not constant on dyadic cell";
                        report.node_a = base;
                        report.node_b = i;
                        return report;
                    }
                }
            }
        }
        // node increment bound on adjacent cell anchors (chains to all pairs)
        const double cell = std::exp2(-static_cast<double>(level));
        for (std::size_t c = 0; c + 1 < cells; ++c) {
            double inc = 0.0;
            for (std::size_t n = 0; n < h.modes; ++n)
                inc = std::max(inc, std::abs(h.at((c + 1) * stride, n) - h.at(c * stride, n)));
            if (inc > 2.0 * cell * (1.0 + 1e-12)) {
                report.pass = false;
                report.reason = "piecewise increment above 2|m-l|2^-n";
                report.node_a = c * stride;
                report.node_b = (c + 1) * stride;
                return report;
            }
        }
    }
    return report;
}

PathFunction dyadic_floor_projection(const PathFunction& h, unsigned n) {
    const std::size_t stride = h.grid.dyadic_stride(n);
    const double mesh = std::exp2(static_cast<double>(n));
    PathFunction out{h.grid, h.modes, {}, PathClass::piecewise, n};
    out.values.resize(h.values.size());
    const std::size_t cells = h.grid.steps() / stride;
    for (std::size_t c = 0; c < cells; ++c) {
        const std::size_t anchor = c * stride;
        Vec v(h.modes);
        for (std::size_t k = 0; k < h.modes; ++k)
            v[k] = std::floor(mesh * h.at(anchor, k)) / mesh;
        const std::size_t last = (c + 1 == cells) ? h.grid.steps() : (c + 1) * stride - 1;
        for (std::size_t i = anchor; i <= last; ++i)
            for (std::size_t k = 0; k < h.modes; ++k) out.values[i * h.modes + k] = v[k];
    }
    return out;
}

double oscillation_sum(const PathFunction& h, unsigned n) {
    const std::size_t half = h.grid.dyadic_stride(n + 1); // nodes per 2^-(n+1) step
    const std::size_t pairs = std::size_t{1} << n;
    double sum = 0.0;
    for (std::size_t k = 0; k < pairs; ++k) {
        const std::size_t left = 2 * k * half;
        const std::size_t right = left + half;
        double inc = 0.0;
        for (std::size_t m = 0; m < h.modes; ++m)
            inc = std::max(inc, std::abs(h.at(right, m) - h.at(left, m)));
        sum += inc;
    }
    return sum;
}

namespace {

Vec range_box(double gamma, const SpectralOperator& op) {
    Vec box(op.dim());
    for (std::size_t n = 0; n < op.dim(); ++n) {
        const double lg = range_bound_log(gamma, op, static_cast<unsigned>(n + 1));
        box[n] = std::exp(lg); // underflows to exact 0 for fast-decaying components
    }
    return box;
}

} // namespace

PathFunction random_lipschitz_member(double gamma, const SpectralOperator& op, const TimeGrid& grid,
                                     std::uint64_t seed, std::uint64_t index) {
    const Vec box = range_box(gamma, op);
    PathFunction h = PathFunction::zero(grid, op.dim(), PathClass::lipschitz);
    Vec cur(op.dim());
    for (std::size_t n = 0; n < op.dim(); ++n)
        cur[n] = box[n] * uniform_sym(seed, StreamDomain::path_members, index, n, 0);
    for (std::size_t n = 0; n < op.dim(); ++n) h.values[n] = cur[n];
    const double dt = grid.dt();
    for (std::size_t i = 1; i < grid.nodes(); ++i) {
        for (std::size_t n = 0; n < op.dim(); ++n) {
            const double step = 2.0 * dt * uniform_sym(seed, StreamDomain::path_members, index, n, i);
            cur[n] = std::clamp(cur[n] + step, -box[n], box[n]);
            h.values[i * op.dim() + n] = cur[n];
        }
    }
    return h;
}

PathFunction random_piecewise_member(double gamma, const SpectralOperator& op, const TimeGrid& grid,
                                     unsigned level, std::uint64_t seed, std::uint64_t index) {
    const Vec box = range_box(gamma, op);
    const std::size_t stride = grid.dyadic_stride(level);
    const std::size_t cells = grid.steps() / stride;
    const double cell = std::exp2(-static_cast<double>(level));
    const double mesh = std::exp2(static_cast<double>(level));
    PathFunction h = PathFunction::zero(grid, op.dim(), PathClass::piecewise);
    h.level = level;
    Vec cur(op.dim());
    for (std::size_t n = 0; n < op.dim(); ++n) {
        // dyadic start value keeps the member inside the dyadic-valued class
        const double raw = box[n] * uniform_sym(seed, StreamDomain::path_members, index, n, 1u << 20);
        cur[n] = std::floor(raw * mesh) / mesh;
        if (std::abs(cur[n]) > box[n]) cur[n] = 0.0;
    }
    for (std::size_t c = 0; c < cells; ++c) {
        if (c > 0) {
            for (std::size_t n = 0; n < op.dim(); ++n) {
                const double raw =
                    2.0 * cell * uniform_sym(seed, StreamDomain::path_members, index, n, (1u << 20) + c);
                double next = cur[n] + std::floor(raw * mesh) / mesh;
                next = std::clamp(next, -box[n], box[n]);
                // clamp to the dyadic lattice while honoring the step bound
                next = std::floor(next * mesh) / mesh;
                if (std::abs(next - cur[n]) > 2.0 * cell) next = cur[n];
                if (std::abs(next) > box[n]) next = cur[n];
                cur[n] = next;
            }
        }
        const std::size_t last = (c + 1 == cells) ? grid.steps() : (c + 1) * stride - 1;
        for (std::size_t i = c * stride; i <= last; ++i)
            for (std::size_t n = 0; n < op.dim(); ++n) h.values[i * op.dim() + n] = cur[n];
    }
    return h;
}

PathFunction ramp_member(double gamma, const SpectralOperator& op, const TimeGrid& grid) {
    const Vec box = range_box(gamma, op);
    PathFunction h = PathFunction::zero(grid, op.dim(), PathClass::lipschitz);
    for (std::size_t i = 0; i < grid.nodes(); ++i)
        h.values[i * op.dim()] = std::min(2.0 * grid.node(i), box[0]);
    return h;
}

} // namespace rbn
