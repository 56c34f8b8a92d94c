#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace rbn {

using Vec = std::vector<double>;

/// Diagonal positive operator A given by its (nondecreasing) eigenvalues.
/// All state of the evolution e^{-tA} and of the driving Ornstein-Uhlenbeck
/// process is per-mode, so the truncation dimension is just the number of
/// retained eigenvalues.
class SpectralOperator {
public:
    explicit SpectralOperator(std::vector<double> eigenvalues);

    static SpectralOperator power_law(std::size_t dim, double alpha);

    std::size_t dim() const { return eigenvalues_.size(); }
    double lambda(std::size_t mode) const { return eigenvalues_[mode]; } // 0-based
    const std::vector<double>& eigenvalues() const { return eigenvalues_; }

    // Advisory only: at finite truncation the trace-class condition is vacuous;
    // flag eigenvalue growth slower than n^{1.01} over the retained modes.
    bool slow_growth_advisory() const;

private:
    std::vector<double> eigenvalues_;
};

/// Uniform grid 0 = t_0 < ... < t_M = horizon with horizon <= 1.
class TimeGrid {
public:
    TimeGrid(double horizon, std::size_t steps);

    double horizon() const { return horizon_; }
    std::size_t steps() const { return steps_; }
    std::size_t nodes() const { return steps_ + 1; }
    double dt() const { return horizon_ / static_cast<double>(steps_); }
    double node(std::size_t i) const { return horizon_ * static_cast<double>(i) / static_cast<double>(steps_); }

    // Number of grid steps per dyadic interval of length 2^-level; throws if
    // the grid does not resolve that level exactly.
    std::size_t dyadic_stride(unsigned level) const;

    bool operator==(const TimeGrid& other) const {
        return horizon_ == other.horizon_ && steps_ == other.steps_;
    }

private:
    double horizon_;
    std::size_t steps_;
};

/// One sampled trajectory of the stochastic convolution Z_t, coefficientwise.
/// Entry (node i, mode n) = <Z_{t_i}, e_n>. Deterministic in
/// (operator, grid, seed, replica).
struct OUPath {
    TimeGrid grid;
    std::size_t modes;
    std::vector<double> coeff; // (steps+1) x modes, row-major by node
    std::uint64_t seed = 0;
    std::uint64_t replica = 0;

    double at(std::size_t node, std::size_t mode) const { return coeff[node * modes + mode]; }
    std::span<const double> node_values(std::size_t node) const {
        return {coeff.data() + node * modes, modes};
    }

    // Restriction to every factor-th node (shared nodes keep their values).
    OUPath subsample(std::size_t factor) const;
};

enum class NoiseMode {
    normal,
    zero_variance, // debug: all Gaussian draws forced to 0
};

/// Componentwise action of e^{-tA}.
Vec semigroup_apply(const SpectralOperator& op, double t, std::span<const double> x);

/// Variance of the exact one-step transition over time dt: (1 - e^{-2 lambda dt}) / (2 lambda).
double transition_variance(double lambda, double dt);

/// Exact-transition simulation: Z_{t+h} = e^{-lambda h} Z_t + N(0, transition_variance).
OUPath simulate_ou(const SpectralOperator& op, const TimeGrid& grid, std::uint64_t seed,
                   std::uint64_t replica, NoiseMode noise = NoiseMode::normal);

/// One-shot exact sample of Z_t for arbitrary t >= 0 (no grid, no horizon cap);
/// used for marginal-law checks such as the stationary-variance probe.
Vec ou_marginal(const SpectralOperator& op, double t, std::uint64_t seed, std::uint64_t replica);

/// Stationary variance of mode n (1-based, matching the eigenvalue index
/// lambda_n): 1 / (2 lambda_n).
double stationary_variance(const SpectralOperator& op, std::size_t n);

double sup_norm(std::span<const double> x);   // |.|_inf
double h_norm(std::span<const double> x);     // |.|_2, the H-norm in coordinates

} // namespace rbn
