#include "rbn/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rbn/lattice.hpp"
#include "rbn/parallel.hpp"
#include "rbn/rng.hpp"

namespace rbn {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Vec box_2q(double gamma, std::size_t dim) {
    // componentwise half-width of the box 2Q
    QDescriptor q(gamma, 0, 2);
    Vec box(dim);
    for (std::size_t n = 0; n < dim; ++n)
        box[n] = std::exp(box_bound_log(q, static_cast<unsigned>(n + 1)));
    return box;
}

struct RatioSample {
    std::vector<double> ratio;
    std::vector<double> normalized;
};

} // namespace

double theta_exponent(double gamma) { return (2.0 / 3.0) * gamma / (gamma + 2.0); }

double double_exp_floor(unsigned n) {
    return std::exp2(-std::exp2(static_cast<double>(n)));
}

double double_exp_floor_theta(unsigned n, double gamma) {
    return std::exp2(-std::exp2(theta_exponent(gamma) * static_cast<double>(n)));
}

double quantile(std::vector<double> values, double q) {
    if (values.empty()) throw std::invalid_argument("quantile: empty sample");
    std::sort(values.begin(), values.end());
    const double pos = std::ceil(q * static_cast<double>(values.size())) - 1.0;
    const std::size_t idx = pos <= 0.0 ? 0 : std::min(values.size() - 1, static_cast<std::size_t>(pos));
    return values[idx];
}

double fit_log_slope(std::span<const std::pair<unsigned, double>> points) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t count = 0;
    for (const auto& [n, v] : points) {
        if (!(v > 0.0)) continue;
        const double x = static_cast<double>(n);
        const double y = std::log(v);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++count;
    }
    if (count < 2) return kNaN;
    const double c = static_cast<double>(count);
    return (c * sxy - sx * sy) / (c * sxx - sx * sx);
}

namespace {

EstimateReport run_scan(const DriftSpec& drift, const SpectralOperator& op, const ScanConfig& cfg,
                        bool pair_scan) {
    if (cfg.n_values.empty()) throw std::invalid_argument("scan: empty n range");
    if (cfg.paths == 0 || cfg.points == 0) throw std::invalid_argument("scan: empty sample");

    const std::size_t d = op.dim();
    const Vec box = box_2q(cfg.gamma, d);
    const double theta = theta_exponent(cfg.gamma);

    EstimateReport report;
    report.theta = theta;
    report.beta_a = cfg.beta_a;
    report.paths = cfg.paths;
    const double beta_factor = 1.0 / std::sqrt(cfg.beta_a);

    for (std::size_t ni = 0; ni < cfg.n_values.size(); ++ni) {
        const unsigned n = cfg.n_values[ni];
        if (n < 1) throw std::invalid_argument("scan: n must be >= 1");
        const TimeGrid grid(1.0, static_cast<std::size_t>(cfg.quadrature_min) << n);
        const double floor_term = pair_scan ? double_exp_floor_theta(n, cfg.gamma) : double_exp_floor(n);
        const double n_factor = pair_scan
                                    ? std::sqrt(static_cast<double>(n)) * std::exp2(-static_cast<double>(n) / 6.0)
                                    : std::pow(static_cast<double>(n), 0.5 + 1.0 / cfg.gamma) *
                                          std::exp2(-static_cast<double>(n) / 2.0);

        std::vector<RatioSample> per_path(cfg.paths);
        parallel_for(cfg.paths, cfg.workers, [&](std::size_t p) {
            const std::uint64_t replica = ni * cfg.paths + p;
            const OUPath path = simulate_ou(op, grid, cfg.seed, replica);
            RatioSample& out = per_path[p];
            out.ratio.reserve(cfg.points);
            out.normalized.reserve(cfg.points);
            Vec x(d), y(d, 0.0);
            for (std::size_t s = 0; s < cfg.points; ++s) {
                std::uint64_t draw = s * (2 * d + 2);
                for (std::size_t m = 0; m < d; ++m)
                    x[m] = box[m] * uniform_sym(cfg.seed, StreamDomain::scan_points, replica, draw++, 1);
                double shift_size;
                if (pair_scan) {
                    // half independent pairs, half nearby pairs at dyadic distances
                    const double mode_sel = uniform01(cfg.seed, StreamDomain::scan_points, replica, draw++, 1);
                    if (mode_sel < 0.5) {
                        for (std::size_t m = 0; m < d; ++m)
                            y[m] = box[m] * uniform_sym(cfg.seed, StreamDomain::scan_points, replica, draw++, 1);
                    } else {
                        const double expo = std::floor(
                            12.0 * uniform01(cfg.seed, StreamDomain::scan_points, replica, draw++, 1));
                        const double delta = std::exp2(-expo);
                        for (std::size_t m = 0; m < d; ++m) {
                            const double u =
                                uniform_sym(cfg.seed, StreamDomain::scan_points, replica, draw++, 1);
                            y[m] = std::clamp(x[m] + delta * box[m] * u, -box[m], box[m]);
                        }
                    }
                    shift_size = 0.0;
                    for (std::size_t m = 0; m < d; ++m)
                        shift_size = std::max(shift_size, std::abs(x[m] - y[m]));
                } else {
                    std::fill(y.begin(), y.end(), 0.0);
                    shift_size = sup_norm(x);
                }
                const auto kmax = std::uint64_t{1} << n;
                const auto k = static_cast<unsigned>(std::min<std::uint64_t>(
                    kmax - 1, static_cast<std::uint64_t>(
                                  std::floor(static_cast<double>(kmax) *
                                             uniform01(cfg.seed, StreamDomain::scan_points, replica,
                                                       draw++, 1)))));
                const ShiftIntegral phi =
                    shift_integral(drift, path, DyadicWindow{n, k}, x, y, cfg.quadrature_min);
                const double bound = beta_factor * (pair_scan
                                                        ? n_factor * shift_size + floor_term
                                                        : n_factor * (shift_size + floor_term));
                out.ratio.push_back(bound > 0.0 ? phi.h_norm / bound : 0.0);
                out.normalized.push_back(shift_size > 0.0 ? phi.h_norm / shift_size : 0.0);
            }
        });

        std::vector<double> ratios, norms;
        ratios.reserve(cfg.paths * cfg.points);
        norms.reserve(cfg.paths * cfg.points);
        for (const RatioSample& s : per_path) {
            ratios.insert(ratios.end(), s.ratio.begin(), s.ratio.end());
            norms.insert(norms.end(), s.normalized.begin(), s.normalized.end());
        }

        ScanRow row;
        row.n = n;
        row.samples = ratios.size();
        row.q50 = quantile(ratios, 0.50);
        row.q95 = quantile(ratios, 0.95);
        row.q99 = quantile(ratios, 0.99);
        row.q50_norm = quantile(norms, 0.50);
        row.q95_norm = quantile(norms, 0.95);
        row.q99_norm = quantile(norms, 0.99);
        row.floor_term = floor_term;
        // documented flag: the additive floor no longer moves the bound
        row.floor_below_eps =
            floor_term < std::numeric_limits<double>::epsilon() * std::max(1e-300, n_factor);
        report.rows.push_back(row);
    }

    std::vector<std::pair<unsigned, double>> pr, pn;
    for (const ScanRow& row : report.rows) {
        pr.emplace_back(row.n, row.q99);
        pn.emplace_back(row.n, row.q99_norm);
    }
    report.slope_ratio = fit_log_slope(pr);
    report.slope_normalized = fit_log_slope(pn);
    return report;
}

const DriftSpec& pick_drift(std::span<const DriftSpec> drifts, unsigned q) {
    if (drifts.empty()) throw std::invalid_argument("chain: empty drift sequence");
    return drifts.size() == 1 ? drifts[0] : drifts[q];
}

} // namespace

EstimateReport sigma_scan(const DriftSpec& drift, const SpectralOperator& op, const ScanConfig& cfg) {
    return run_scan(drift, op, cfg, false);
}

EstimateReport rho_scan(const DriftSpec& drift, const SpectralOperator& op, const ScanConfig& cfg) {
    return run_scan(drift, op, cfg, true);
}

EulerChain euler_chain(std::span<const DriftSpec> drifts, const OUPath& path, unsigned n, unsigned k,
                       unsigned r, const Vec& x0, bool allow_long_chain, unsigned quadrature_min) {
    if (drifts.size() != 1 && drifts.size() < r)
        throw std::invalid_argument("euler_chain: drift sequence shorter than the chain");
    if (!allow_long_chain &&
        static_cast<double>(r) > std::exp2(static_cast<double>(n) / 4.0))
        throw std::invalid_argument("euler_chain: r > 2^(n/4); pass allow_long_chain to override");
    if (static_cast<std::uint64_t>(k) + r > (std::uint64_t{1} << n) - 1)
        throw std::invalid_argument("euler_chain: interval overflow, need k + r <= 2^n - 1");

    EulerChain chain;
    chain.n = n;
    chain.k = k;
    chain.r = r;
    chain.points.push_back(x0);
    for (unsigned q = 0; q < r; ++q) {
        const ShiftIntegral phi = shift_integral(pick_drift(drifts, q), path,
                                                 DyadicWindow{n, k + q}, chain.points.back(),
                                                 quadrature_min);
        Vec next = chain.points.back();
        for (std::size_t m = 0; m < next.size(); ++m) next[m] += phi.vector[m];
        chain.steps.push_back(phi.vector);
        chain.errors.emplace_back(next.size(), 0.0);
        chain.points.push_back(std::move(next));
    }
    return chain;
}

EulerChain chain_with_errors(std::span<const DriftSpec> drifts, const OUPath& path, unsigned n,
                             unsigned k, std::span<const Vec> points, unsigned quadrature_min) {
    if (points.size() < 2) throw std::invalid_argument("chain_with_errors: need at least two points");
    EulerChain chain;
    chain.n = n;
    chain.k = k;
    chain.r = static_cast<unsigned>(points.size() - 1);
    chain.points.assign(points.begin(), points.end());
    for (unsigned q = 0; q < chain.r; ++q) {
        const ShiftIntegral phi = shift_integral(pick_drift(drifts, q), path,
                                                 DyadicWindow{n, k + q}, chain.points[q],
                                                 quadrature_min);
        Vec gamma(chain.points[q].size());
        for (std::size_t m = 0; m < gamma.size(); ++m)
            gamma[m] = chain.points[q + 1][m] - chain.points[q][m] - phi.vector[m];
        chain.steps.push_back(phi.vector);
        chain.errors.push_back(std::move(gamma));
    }
    return chain;
}

std::vector<DriftSpec> twisted_sequence(const DriftSpec& base, const SpectralOperator& op, unsigned n,
                                        unsigned k, unsigned count) {
    std::vector<DriftSpec> out;
    out.reserve(count);
    for (unsigned q = 0; q < count; ++q) out.push_back(twist(base, op, n, k + q));
    return out;
}

ChainSumReport chain_sum_estimate(std::span<const DriftSpec> drifts, const OUPath& path,
                                  const EulerChain& chain, double gamma, unsigned quadrature_min) {
    const unsigned N = chain.r;
    if (static_cast<std::uint64_t>(N) > (std::uint64_t{1} << chain.n))
        throw std::invalid_argument("chain_sum_estimate: N > 2^n");
    ChainSumReport report;
    const double two_n = std::exp2(-static_cast<double>(chain.n));

    for (unsigned q = 0; q < N; ++q) {
        const DriftSpec& b = pick_drift(drifts, q);
        const ShiftIntegral two_arg = shift_integral(b, path, DyadicWindow{chain.n, chain.k + q},
                                                     chain.points[q + 1], chain.points[q],
                                                     quadrature_min);
        report.lhs += two_arg.h_norm;
        // internal consistency: the stored one-argument steps must reproduce bitwise
        const ShiftIntegral one_arg = shift_integral(b, path, DyadicWindow{chain.n, chain.k + q},
                                                     chain.points[q], quadrature_min);
        for (std::size_t m = 0; m < one_arg.vector.size(); ++m)
            if (one_arg.vector[m] != chain.steps[q][m]) report.bitwise_consistent = false;
        report.term_errors += h_norm(chain.errors[q]);
    }
    report.term_errors *= std::exp2(-static_cast<double>(chain.n) / 24.0);

    for (const Vec& x : chain.points) report.term_points += h_norm(x);
    report.term_points *= two_n;
    report.term_start = std::exp2(-0.75 * static_cast<double>(chain.n)) * h_norm(chain.points[0]);
    report.term_floor = static_cast<double>(N) * double_exp_floor_theta(chain.n, gamma);

    const double bracket =
        report.term_points + report.term_start + report.term_errors + report.term_floor;
    if (report.lhs == 0.0) {
        report.undefined = true;
        report.implied_constant = kNaN;
    } else {
        report.implied_constant = report.lhs / bracket;
    }
    return report;
}

double bdg_check(double p, unsigned walk_length, WalkFamily family, std::size_t replicas,
                 std::uint64_t seed) {
    if (!(p >= 2.0)) throw std::invalid_argument("bdg_check: need p >= 2");
    if (walk_length == 0) throw std::invalid_argument("bdg_check: walk length must be >= 1");
    const double n = static_cast<double>(walk_length);

    if (family == WalkFamily::pm1) {
        if (walk_length > 20)
            throw std::invalid_argument("bdg_check: exact +/-1 enumeration limited to length 20");
        // M = 2j - n with binomial weight; <M>_n = n deterministically.
        double moment = 0.0;
        double weight = std::exp2(-n); // C(n, 0) / 2^n
        for (unsigned j = 0; j <= walk_length; ++j) {
            const double m = 2.0 * static_cast<double>(j) - n;
            moment += weight * std::pow(std::abs(m), p);
            weight *= static_cast<double>(walk_length - j) / static_cast<double>(j + 1);
        }
        return std::pow(moment, 1.0 / p) / std::sqrt(n);
    }

    if (replicas == 0) throw std::invalid_argument("bdg_check: Monte Carlo needs replicas");
    double moment = 0.0;
    for (std::size_t rep = 0; rep < replicas; ++rep) {
        double m = 0.0;
        for (unsigned i = 0; i < walk_length; ++i)
            m += normal(seed, StreamDomain::martingale, rep, i, 0);
        moment += std::pow(std::abs(m), p);
    }
    moment /= static_cast<double>(replicas);
    return std::pow(moment, 1.0 / p) / std::sqrt(n);
}

MartingaleSample sample_martingale(IncrementFamily family, double C, unsigned r, std::uint64_t seed,
                                   std::uint64_t replica) {
    if (family == IncrementFamily::gaussian)
        throw std::invalid_argument("sample_martingale: gaussian increments carry no bounded-increment certificate");
    if (!(C > 0.0)) throw std::invalid_argument("sample_martingale: C must be > 0");
    MartingaleSample s;
    s.certificate_c = C;
    s.increments.resize(r);
    s.partial_sums.resize(r);
    double sum = 0.0;
    for (unsigned q = 0; q < r; ++q) {
        double x = 0.0;
        switch (family) {
            case IncrementFamily::zero: x = 0.0; break;
            case IncrementFamily::pm:
                x = sign_hash(seed, StreamDomain::martingale, replica, q, 1) * C;
                break;
            case IncrementFamily::uniform:
                x = C * uniform_sym(seed, StreamDomain::martingale, replica, q, 2);
                break;
            case IncrementFamily::gaussian: break;
        }
        s.increments[q] = x;
        sum += x;
        s.partial_sums[q] = sum;
    }
    return s;
}

ExpMomentResult exp_moment_check(double C, unsigned r, IncrementFamily family, std::size_t replicas,
                                 std::uint64_t seed, unsigned workers) {
    if (r == 0) throw std::invalid_argument("exp_moment_check: r must be >= 1");
    if (replicas == 0) throw std::invalid_argument("exp_moment_check: replicas must be >= 1");
    if (family == IncrementFamily::gaussian)
        throw std::invalid_argument("exp_moment_check: family not certified (unbounded increments)");

    const double scale = C * std::sqrt(static_cast<double>(r));
    std::vector<double> pos(replicas), abs(replicas);
    parallel_for(replicas, workers, [&](std::size_t rep) {
        const MartingaleSample s = sample_martingale(family, C, r, seed, rep);
        const double m = s.partial_sums.back();
        pos[rep] = std::exp(0.125 * std::sqrt(std::max(m, 0.0) / scale));
        abs[rep] = std::exp(0.125 * std::sqrt(std::abs(m) / scale));
    });

    ExpMomentResult out;
    out.replicas = replicas;
    double sum = 0.0, sum2 = 0.0, suma = 0.0, suma2 = 0.0;
    for (std::size_t i = 0; i < replicas; ++i) {
        sum += pos[i];
        sum2 += pos[i] * pos[i];
        suma += abs[i];
        suma2 += abs[i] * abs[i];
    }
    const double nrep = static_cast<double>(replicas);
    out.estimate = sum / nrep;
    out.estimate_abs = suma / nrep;
    out.standard_error = std::sqrt(std::max(0.0, sum2 / nrep - out.estimate * out.estimate) / nrep);
    out.standard_error_abs =
        std::sqrt(std::max(0.0, suma2 / nrep - out.estimate_abs * out.estimate_abs) / nrep);
    return out;
}

} // namespace rbn
