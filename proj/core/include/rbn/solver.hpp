#pragma once

#include <cstdint>
#include <vector>

#include "rbn/drift.hpp"
#include "rbn/funcspace.hpp"
#include "rbn/spectral.hpp"

namespace rbn {

struct MildSolveConfig {
    double tolerance = 1e-9;       // sup-norm over grid nodes of |.|_H
    std::size_t max_iterations = 200;
    double damping = 1.0;          // update x <- (1-w) x + w F(x)
    double gamma = 7.0;            // range parameter for initialization membership checks
};

struct SolutionPath {
    PathFunction path;
    double residual = 0.0; // sup over nodes of |x - F(x)|_H for the returned x
    std::size_t iterations = 0;
    bool converged = false; // non-convergence is an outcome, not an error
};

/// One application of the mild fixed-point map
///   F(x)(t_i) = e^{-t_i A} x0 + int_0^{t_i} e^{-(t_i - s) A} f(s, x(s)) ds + Z(t_i)
/// with the semigroup factor integrated exactly over each subinterval against
/// the left-node drift value (exponential integrator). The convolution is
/// accumulated by the recursion conv <- e^{-lambda h} conv + w f, where
/// w = (1 - e^{-lambda h}) / lambda is the exact subinterval weight.
PathFunction picard_step_mild(const DriftSpec& drift, const SpectralOperator& op, const Vec& x0,
                              const OUPath& noise, const PathFunction& current);

/// Difference map of the drift-increment equation:
///   G(u)(t_i) = int_0^{t_i} e^{-(t_i - s) A} ( f(s, Z(s) + u(s)) - f(s, Z(s)) ) ds.
/// Maps the zero function to itself exactly.
PathFunction difference_step(const DriftSpec& drift, const SpectralOperator& op, const OUPath& noise,
                             const PathFunction& current);

/// Picard iteration of F from the drift-free mild solution (optionally offset);
/// stops when the sup-change is within tolerance. The returned iterate is the
/// last one whose image was computed, so converged implies residual <= tolerance.
SolutionPath solve_mild(const DriftSpec& drift, const SpectralOperator& op, const Vec& x0,
                        const OUPath& noise, const MildSolveConfig& cfg,
                        const PathFunction* initial_offset = nullptr);

/// Picard iteration of the difference map from u_init.
SolutionPath solve_difference(const DriftSpec& drift, const SpectralOperator& op, const OUPath& noise,
                              const PathFunction& u_init, const MildSolveConfig& cfg);

struct UniquenessReport {
    std::size_t paths = 0;
    std::size_t inits = 0;
    std::vector<double> max_pair_distance; // per path, over converged runs
    std::vector<unsigned> converged_runs;  // per path
    std::size_t nonconverged = 0;          // total runs that failed to converge
    double success_fraction = 0.0; // all runs converged and distance < 10 x tolerance
};

/// Per path: solve from several initializations (drift-free solution plus
/// offsets: zero, the boundary ramp, a seeded random Lipschitz-class member),
/// then record pairwise sup-distances among the converged solutions.
UniquenessReport uniqueness_experiment(const DriftSpec& drift, const SpectralOperator& op,
                                       std::size_t paths, std::size_t inits, const TimeGrid& grid,
                                       const MildSolveConfig& cfg, std::uint64_t seed,
                                       unsigned workers = 1, const Vec* x0 = nullptr);

} // namespace rbn
