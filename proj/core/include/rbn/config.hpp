#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rbn/drift.hpp"
#include "rbn/spectral.hpp"

namespace rbn {

/// Flat experiment configuration. Parsed from `key=value` lines (one pair per
/// line, '#' comments); every field is validated before any computation and
/// unknown keys are rejected. CLI flags mirror the keys and override the file.
struct ExperimentConfig {
    // operator
    std::vector<double> eigenvalues; // explicit list; empty means power law
    double lambda_alpha = 2.0;       // lambda_n = n^alpha
    std::uint64_t dim = 8;

    double gamma = 7.0;

    // drift
    std::string drift = "sign";
    std::string drift_scale = "assumption"; // or a positive number, uniform across modes
    double sign_a0 = 0.0;
    double sign_a1 = 0.0;
    std::uint64_t cell_resolution = 8;
    std::uint64_t salt = 0;

    // grid / sampling
    double horizon = 1.0;
    std::uint64_t grid_steps = 1024;
    std::uint64_t replicas = 1000;
    std::uint64_t seed = 1;
    std::uint64_t workers = 1;
    std::string out; // empty = stdout
    std::uint64_t budget = 10'000'000;
    std::uint64_t quadrature_min = 16;

    // solver
    double tolerance = 1e-9;
    std::uint64_t max_iterations = 200;
    double damping = 1.0;

    // estimates
    double beta_a = 1.0;
    std::uint64_t n_min = 4;
    std::uint64_t n_max = 10;
    std::uint64_t points = 32;

    // lattice
    std::uint64_t r = 0;
    std::uint64_t m = 10;
    std::uint64_t scale = 1;

    // gronwall
    double K = 0.5;
    double beta0 = 1e-4;
    std::uint64_t steps = 0; // 0 = run the full 2^m steps

    // martingale checks
    double p = 2.0;
    std::uint64_t walk_length = 12;
    std::string family = "pm"; // zero | pm | uniform (walks: pm1 | gaussian)
    double C = 1.0;

    // euler chain
    std::uint64_t chain_n = 8;
    std::uint64_t chain_k = 0;
    std::uint64_t chain_r = 4;

    // uniqueness
    std::uint64_t paths = 50;
    std::uint64_t inits = 3;
    std::vector<double> x0; // padded with zeros to dim

    SpectralOperator make_operator() const;
    DriftSpec make_drift() const;

    /// Canonical `key=value` lines of every experiment-relevant field
    /// (everything except `out` and `workers`, which do not affect results).
    std::vector<std::pair<std::string, std::string>> echo() const;
};

struct ParseOutcome {
    std::optional<ExperimentConfig> config;
    std::vector<std::string> errors; // all of them, not just the first
};

ParseOutcome parse_config(const std::string& text, ExperimentConfig base = {});

/// Re-validates a config assembled from flags; returns every violation.
std::vector<std::string> validate_config(const ExperimentConfig& cfg);

} // namespace rbn
