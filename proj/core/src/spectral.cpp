#include "rbn/spectral.hpp"

#include <cmath>
#include <stdexcept>

#include "rbn/rng.hpp"

namespace rbn {

SpectralOperator::SpectralOperator(std::vector<double> eigenvalues)
    : eigenvalues_(std::move(eigenvalues)) {
    if (eigenvalues_.empty()) throw std::invalid_argument("SpectralOperator: no eigenvalues");
    double prev = 0.0;
    for (double lambda : eigenvalues_) {
        if (!(lambda > 0.0)) throw std::invalid_argument("SpectralOperator: eigenvalues must be positive");
        if (lambda < prev) throw std::invalid_argument("SpectralOperator: eigenvalues must be nondecreasing");
        prev = lambda;
    }
}

SpectralOperator SpectralOperator::power_law(std::size_t dim, double alpha) {
    if (dim == 0) throw std::invalid_argument("SpectralOperator: dim must be >= 1");
    std::vector<double> lambda(dim);
    for (std::size_t n = 0; n < dim; ++n) lambda[n] = std::pow(static_cast<double>(n + 1), alpha);
    return SpectralOperator(std::move(lambda));
}

bool SpectralOperator::slow_growth_advisory() const {
    const std::size_t d = eigenvalues_.size();
    if (d < 2) return false;
    // lambda_n ~ c n^p with p <= 1.01 over the retained modes is suspect.
    const double p = std::log(eigenvalues_[d - 1] / eigenvalues_[0]) /
                     std::log(static_cast<double>(d));
    return p < 1.01;
}

TimeGrid::TimeGrid(double horizon, std::size_t steps) : horizon_(horizon), steps_(steps) {
    if (!(horizon > 0.0)) throw std::invalid_argument("TimeGrid: horizon must be positive");
    if (horizon > 1.0) throw std::invalid_argument("TimeGrid: horizon must be <= 1");
    if (steps == 0) throw std::invalid_argument("TimeGrid: need at least one step");
}

std::size_t TimeGrid::dyadic_stride(unsigned level) const {
    if (horizon_ != 1.0)
        throw std::invalid_argument("TimeGrid: dyadic intervals require horizon 1");
    const std::size_t cells = std::size_t{1} << level;
    if (steps_ % cells != 0)
        throw std::invalid_argument("TimeGrid: grid does not resolve dyadic level");
    return steps_ / cells;
}

OUPath OUPath::subsample(std::size_t factor) const {
    if (factor == 0 || grid.steps() % factor != 0)
        throw std::invalid_argument("OUPath::subsample: factor must divide the step count");
    TimeGrid coarse(grid.horizon(), grid.steps() / factor);
    OUPath out{coarse, modes, {}, seed, replica};
    out.coeff.resize(coarse.nodes() * modes);
    for (std::size_t i = 0; i <= coarse.steps(); ++i)
        for (std::size_t n = 0; n < modes; ++n)
            out.coeff[i * modes + n] = at(i * factor, n);
    return out;
}

Vec semigroup_apply(const SpectralOperator& op, double t, std::span<const double> x) {
    if (t < 0.0) throw std::invalid_argument("semigroup_apply: t must be >= 0");
    if (x.size() != op.dim()) throw std::invalid_argument("semigroup_apply: dimension mismatch");
    Vec out(x.size());
    for (std::size_t n = 0; n < x.size(); ++n) out[n] = std::exp(-op.lambda(n) * t) * x[n];
    return out;
}

double transition_variance(double lambda, double dt) {
    // -expm1 keeps precision for small lambda * dt.
    return -std::expm1(-2.0 * lambda * dt) / (2.0 * lambda);
}

OUPath simulate_ou(const SpectralOperator& op, const TimeGrid& grid, std::uint64_t seed,
                   std::uint64_t replica, NoiseMode noise) {
    const std::size_t d = op.dim();
    OUPath path{grid, d, {}, seed, replica};
    path.coeff.assign(grid.nodes() * d, 0.0);
    const double h = grid.dt();
    for (std::size_t n = 0; n < d; ++n) {
        const double decay = std::exp(-op.lambda(n) * h);
        const double sd = std::sqrt(transition_variance(op.lambda(n), h));
        double z = 0.0; // process starts at 0
        for (std::size_t i = 1; i <= grid.steps(); ++i) {
            const double xi = noise == NoiseMode::zero_variance
                                  ? 0.0
                                  : normal(seed, StreamDomain::ou_noise, i, n, replica);
            z = decay * z + sd * xi;
            path.coeff[i * d + n] = z;
        }
    }
    return path;
}

Vec ou_marginal(const SpectralOperator& op, double t, std::uint64_t seed, std::uint64_t replica) {
    if (t < 0.0) throw std::invalid_argument("ou_marginal: t must be >= 0");
    Vec out(op.dim(), 0.0);
    if (t == 0.0) return out;
    for (std::size_t n = 0; n < op.dim(); ++n) {
        const double sd = std::sqrt(transition_variance(op.lambda(n), t));
        out[n] = sd * normal(seed, StreamDomain::ou_marginal, 0, n, replica);
    }
    return out;
}

double stationary_variance(const SpectralOperator& op, std::size_t n) {
    if (n < 1 || n > op.dim()) throw std::out_of_range("stationary_variance: mode index out of range");
    return 1.0 / (2.0 * op.lambda(n - 1));
}

double sup_norm(std::span<const double> x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

double h_norm(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

} // namespace rbn
