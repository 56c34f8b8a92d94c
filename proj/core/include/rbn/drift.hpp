#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rbn/spectral.hpp"

namespace rbn {

enum class DriftFamily {
    zero,
    constant,
    lipschitz,        // component n: c_n * sin(z_n); space-Lipschitz with constant max c_n
    sign,             // component n: c_n * sgn(z_n - a(t)), sgn(0) := +1; measurable, nowhere continuous
    piecewise_random, // component n: c_n * (+/-1) hashed from the (t, z_n) cell; measurable noise field
    linear_test,      // f(t, z) = z; unbounded, exempt from validation, for exact quadrature oracles
};

const char* family_name(DriftFamily f);
std::optional<DriftFamily> family_from_name(const std::string& name);

/// A bounded measurable drift f: [0,1] x H -> H in coordinates. Immutable and
/// reentrant; evaluation is a pure function of (t, z).
struct DriftSpec {
    DriftFamily family = DriftFamily::zero;
    std::vector<double> component_scale; // c_n per mode
    double threshold_a0 = 0.0;           // sign family: a(t) = a0 + a1 t
    double threshold_a1 = 0.0;
    unsigned cell_resolution = 8; // piecewise_random: cells of side 2^-resolution
    std::uint64_t salt = 0;       // piecewise_random hash salt
    bool validation = true;       // linear_test must carry validation = false

    // Semigroup twist e^{-(deadline - t) lambda_i} applied componentwise.
    bool twisted = false;
    std::vector<double> twist_rates;
    double twist_deadline = 0.0;

    std::size_t dim() const { return component_scale.size(); }

    Vec evaluate(double t, std::span<const double> z) const;

    // Exact per-component sup |f^(n)| where the family admits one (all
    // families except linear_test; used as closed-form validation certificate).
    std::optional<Vec> component_sup() const;

    /// Assumption-style scales c_n = exp(-e^{n^gamma}); entries below the
    /// smallest positive double come out as exact 0.
    static std::vector<double> decay_scales(double gamma, std::size_t dim);

    static DriftSpec make(DriftFamily family, std::vector<double> scales);
};

/// Worst observed violation during validation.
struct DecayWitness {
    int check = 0; // 1 = H-norm sup, 2 = weighted sum, 3 = component decay
    unsigned component = 0;
    double t = 0.0;
    double value = 0.0; // offending quantity (log scale for check 3)
};

/// Certificate that the drift passes the three decay conditions: sup |f|_H <= 1,
/// sup sum_n lambda_n e^{2 lambda_n} |f^(n)|^2 <= 1 (log-sum-exp), and
/// |f^(n)| <= exp(-e^{n^gamma}) per component (log space). Checked on closed-form
/// sups when the family has them, otherwise on the sampled grid.
struct DecayCertificate {
    double gamma = 0.0;
    bool pass = false;
    bool closed_form = false;
    std::vector<double> component_log_margin; // ln bound - ln sup|f^(n)| (+inf when sup = 0)
    double sup_h_norm = 0.0;
    double weighted_log = 0.0; // ln of sup_n-sum, -inf for zero drift
    DecayWitness worst;
};

struct SamplePoint {
    double t;
    Vec z;
};

/// Structured corners plus seeded random (t, z) pairs for sampling-based sups.
std::vector<SamplePoint> default_validation_grid(const SpectralOperator& op, std::uint64_t seed,
                                                 std::size_t samples = 10'000);

DecayCertificate validate_assumption(const DriftSpec& drift, const SpectralOperator& op, double gamma,
                                     std::span<const SamplePoint> grid);

/// Semigroup-twisted drift t |-> e^{-((k+1) 2^-n - t) A} f(t, .). On
/// [0, (k+1) 2^-n] the factor has modulus <= 1, so the twist inherits the
/// decay conditions there.
DriftSpec twist(const DriftSpec& drift, const SpectralOperator& op, unsigned n, unsigned k);

} // namespace rbn
