#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rbn/spectral.hpp"

namespace rbn {

enum class PathClass {
    lipschitz, // |h(s) - h(t)|_inf <= 2|s - t|, values in the decay box intersected with the A-ellipsoid
    piecewise, // constant on left-closed dyadic cells of length 2^-level, with the matching node-increment bound
    untagged,
};

/// A function [0,1] -> H stored at grid nodes. Class membership between nodes
/// is certified by the class structure (Lipschitz interpolation or
/// left-closed piecewise constancy), so node values carry exact semantics.
struct PathFunction {
    TimeGrid grid;
    std::size_t modes = 0;
    std::vector<double> values; // (steps+1) x modes, row-major by node
    PathClass cls = PathClass::untagged;
    unsigned level = 0; // for piecewise

    static PathFunction zero(const TimeGrid& grid, std::size_t modes,
                             PathClass cls = PathClass::lipschitz);

    double at(std::size_t node, std::size_t mode) const { return values[node * modes + mode]; }
    std::span<const double> node_values(std::size_t node) const {
        return {values.data() + node * modes, modes};
    }
    std::span<double> node_values_mut(std::size_t node) {
        return {values.data() + node * modes, modes};
    }

    double sup_distance(const PathFunction& other) const; // sup over nodes of |.|_H
    double sup_h_norm() const;
};

struct PathMembership {
    bool pass = true;
    std::string reason;
    std::size_t node_a = 0; // first violating node pair (or node for range violations)
    std::size_t node_b = 0;
    unsigned component = 0; // 1-based, 0 when not applicable
};

/// ln of the componentwise range bound of the value set (the gamma-decay box
/// of unit scale intersected with the ellipsoid lambda_n e^{2 lambda_n} x_n^2 <= 1).
double range_bound_log(double gamma, const SpectralOperator& op, unsigned n);

/// Verifies the class structure (Lipschitz or piecewise-constant with the node
/// increment bound) and the range membership of every node value, in log
/// space. Reports the first violation.
PathMembership check_membership(const PathFunction& h, PathClass cls, unsigned level, double gamma,
                                const SpectralOperator& op);

/// Componentwise floor to the 2^-n lattice of the cell's left-endpoint value:
/// t |-> floor(2^n h(k 2^-n)) / 2^n on [k 2^-n, (k+1) 2^-n). Floor is toward
/// -inf. The final node t = 1 keeps the last cell's value.
PathFunction dyadic_floor_projection(const PathFunction& h, unsigned n);

/// sum_{k=0}^{2^n - 1} |h((2k+1) 2^-(n+1)) - h(2k 2^-(n+1))|_inf. For members
/// of the Lipschitz or piecewise classes the value is <= 1.
double oscillation_sum(const PathFunction& h, unsigned n);

// Seeded random members, exposed for the test suite and the solver's
// initialization sweep.
PathFunction random_lipschitz_member(double gamma, const SpectralOperator& op, const TimeGrid& grid,
                                     std::uint64_t seed, std::uint64_t index);
PathFunction random_piecewise_member(double gamma, const SpectralOperator& op, const TimeGrid& grid,
                                     unsigned level, std::uint64_t seed, std::uint64_t index);

/// The boundary-Lipschitz ramp h(t) = (min(2t, bound_1), 0, ..., 0).
PathFunction ramp_member(double gamma, const SpectralOperator& op, const TimeGrid& grid);

} // namespace rbn
