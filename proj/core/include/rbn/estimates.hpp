#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rbn/drift.hpp"
#include "rbn/shift_integral.hpp"
#include "rbn/spectral.hpp"

namespace rbn {

/// theta = (2/3) gamma / (gamma + 2), the exponent of the pair-bound floor term.
double theta_exponent(double gamma);

/// 2^-2^n as a double; exact 0 once past the subnormal range (n >= 11).
double double_exp_floor(unsigned n);

/// 2^-2^(theta n).
double double_exp_floor_theta(unsigned n, double gamma);

struct ScanConfig {
    std::vector<unsigned> n_values;
    std::size_t paths = 100;  // fresh OU paths (replicas) per n
    std::size_t points = 32;  // sampled shifts or pairs per path
    double gamma = 7.0;
    double beta_a = 1.0; // configurable constant of the underlying Gaussian estimate
    unsigned quadrature_min = 16;
    std::uint64_t seed = 1;
    unsigned workers = 1;
};

struct ScanRow {
    unsigned n = 0;
    std::size_t samples = 0;
    double q50 = 0.0, q95 = 0.0, q99 = 0.0;                // ratio |phi| / bound
    double q50_norm = 0.0, q95_norm = 0.0, q99_norm = 0.0; // |phi| / shift size only
    double floor_term = 0.0;
    bool floor_below_eps = false; // additive floor below machine epsilon of the leading term
};

/// Per-n quantiles of measured-to-bound ratios plus fitted log-slopes. The
/// paper's constants are existence constants, so only scaling and stability
/// are asserted downstream, never absolute values.
struct EstimateReport {
    std::vector<ScanRow> rows;
    double slope_ratio = 0.0;      // least-squares slope of ln(q99 ratio) vs n
    double slope_normalized = 0.0; // same for the normalized quantile
    double theta = 0.0;
    double beta_a = 1.0;
    std::size_t paths = 0;
};

/// One-argument bound: beta_A^{-1/2} n^{1/2 + 1/gamma} 2^{-n/2} (|x|_inf + 2^-2^n).
EstimateReport sigma_scan(const DriftSpec& drift, const SpectralOperator& op, const ScanConfig& cfg);

/// Pair bound: beta_A^{-1/2} (sqrt(n) 2^{-n/6} |x - y|_inf + 2^-2^(theta n)).
EstimateReport rho_scan(const DriftSpec& drift, const SpectralOperator& op, const ScanConfig& cfg);

/// Euler chain x_{q+1} = x_q + phi_{n, k+q}(b_q; x_q) on one path. The drift
/// span holds the b_q sequence (a single entry is broadcast). Chains built
/// here have gamma_q = 0 by construction.
struct EulerChain {
    unsigned n = 0, k = 0, r = 0;
    std::vector<Vec> points; // x_0 .. x_r
    std::vector<Vec> steps;  // phi(b_q; x_q), q = 0 .. r-1
    std::vector<Vec> errors; // gamma_q, q = 0 .. r-1
};

EulerChain euler_chain(std::span<const DriftSpec> drifts, const OUPath& path, unsigned n, unsigned k,
                       unsigned r, const Vec& x0, bool allow_long_chain = false,
                       unsigned quadrature_min = 16);

/// Wraps an externally produced sequence y_0..y_r, computing its Euler errors
/// gamma_q = y_{q+1} - y_q - phi(b_q; y_q) on the given path.
EulerChain chain_with_errors(std::span<const DriftSpec> drifts, const OUPath& path, unsigned n,
                             unsigned k, std::span<const Vec> points, unsigned quadrature_min = 16);

/// Twisted drift sequence b_q = e^{-((k+q+1) 2^-n - t) A} f(t, .), q = 0..count-1.
std::vector<DriftSpec> twisted_sequence(const DriftSpec& base, const SpectralOperator& op, unsigned n,
                                        unsigned k, unsigned count);

struct ChainSumReport {
    double lhs = 0.0; // sum of two-argument integral norms along the chain
    double term_points = 0.0;
    double term_start = 0.0;
    double term_errors = 0.0;
    double term_floor = 0.0;
    double implied_constant = 0.0;
    bool undefined = false;         // lhs and bracket both vanish
    bool bitwise_consistent = true; // recomputed Euler steps match the chain's stored ones
};

ChainSumReport chain_sum_estimate(std::span<const DriftSpec> drifts, const OUPath& path,
                                  const EulerChain& chain, double gamma,
                                  unsigned quadrature_min = 16);

enum class WalkFamily {
    pm1,      // increments +/-1; exact enumeration for length <= 20
    gaussian, // increments N(0,1); Monte Carlo
};

/// Ratio (E|M_n|^p)^{1/p} / (E <M>_n^{p/2})^{1/p}; must be <= p for p >= 2.
double bdg_check(double p, unsigned walk_length, WalkFamily family, std::size_t replicas = 100'000,
                 std::uint64_t seed = 1);

enum class IncrementFamily {
    zero,     // X == 0
    pm,       // X uniform on {-C, +C}
    uniform,  // X uniform on [-C, C]
    gaussian, // unbounded: rejected (no closed-form moment certificate here)
};

struct MartingaleSample {
    std::vector<double> increments;
    std::vector<double> partial_sums;
    double certificate_c = 0.0; // E|X|^p <= C^p p^p via |X| <= C
};

MartingaleSample sample_martingale(IncrementFamily family, double C, unsigned r, std::uint64_t seed,
                                   std::uint64_t replica);

struct ExpMomentResult {
    double estimate = 0.0; // E exp( (1/8) (M_r^+ / (C sqrt r))^{1/2} ), Monte Carlo
    double standard_error = 0.0;
    double estimate_abs = 0.0; // |M_r| variant, reported alongside
    double standard_error_abs = 0.0;
    std::size_t replicas = 0;
};

/// Families must carry the bounded-increment certificate |X| <= C; others are
/// rejected. The positive part keeps the square root real; see the report's
/// abs fields for the |M_r| reading.
ExpMomentResult exp_moment_check(double C, unsigned r, IncrementFamily family, std::size_t replicas,
                                 std::uint64_t seed, unsigned workers = 1);

/// Deterministic quantile (sorted order statistic at ceil(q N)).
double quantile(std::vector<double> values, double q);

/// Least-squares slope of ln(value) vs n over rows with positive values;
/// NaN when fewer than two rows qualify.
double fit_log_slope(std::span<const std::pair<unsigned, double>> points);

} // namespace rbn
