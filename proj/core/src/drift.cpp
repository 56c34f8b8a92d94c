#include "rbn/drift.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "rbn/rng.hpp"

namespace rbn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double twist_factor(double rate, double deadline, double t) {
    return std::exp(-rate * (deadline - t));
}

} // namespace

const char* family_name(DriftFamily f) {
    switch (f) {
        case DriftFamily::zero: return "zero";
        case DriftFamily::constant: return "constant";
        case DriftFamily::lipschitz: return "lipschitz";
        case DriftFamily::sign: return "sign";
        case DriftFamily::piecewise_random: return "piecewise-random";
        case DriftFamily::linear_test: return "linear-test";
    }
    return "?";
}

std::optional<DriftFamily> family_from_name(const std::string& name) {
    for (DriftFamily f : {DriftFamily::zero, DriftFamily::constant, DriftFamily::lipschitz,
                          DriftFamily::sign, DriftFamily::piecewise_random, DriftFamily::linear_test})
        if (name == family_name(f)) return f;
    return std::nullopt;
}

Vec DriftSpec::evaluate(double t, std::span<const double> z) const {
    if (t < 0.0 || t > 1.0) throw std::invalid_argument("DriftSpec::evaluate: t outside [0,1]");
    if (z.size() != dim()) throw std::invalid_argument("DriftSpec::evaluate: dimension mismatch");
    Vec out(dim(), 0.0);
    switch (family) {
        case DriftFamily::zero:
            break;
        case DriftFamily::constant:
            for (std::size_t n = 0; n < dim(); ++n) out[n] = component_scale[n];
            break;
        case DriftFamily::lipschitz:
            for (std::size_t n = 0; n < dim(); ++n)
                if (component_scale[n] != 0.0) out[n] = component_scale[n] * std::sin(z[n]);
            break;
        case DriftFamily::sign: {
            const double a = threshold_a0 + threshold_a1 * t;
            for (std::size_t n = 0; n < dim(); ++n)
                if (component_scale[n] != 0.0)
                    out[n] = z[n] >= a ? component_scale[n] : -component_scale[n];
            break;
        }
        case DriftFamily::piecewise_random: {
            const double res = std::exp2(static_cast<double>(cell_resolution));
            const auto cell_t = static_cast<std::uint64_t>(static_cast<long long>(std::floor(t * res)));
            for (std::size_t n = 0; n < dim(); ++n) {
                if (component_scale[n] == 0.0) continue;
                const auto cell_z =
                    static_cast<std::uint64_t>(static_cast<long long>(std::floor(z[n] * res)));
                out[n] = component_scale[n] *
                         sign_hash(salt, StreamDomain::drift_cells, cell_t, cell_z, n);
            }
            break;
        }
        case DriftFamily::linear_test:
            for (std::size_t n = 0; n < dim(); ++n) out[n] = z[n];
            break;
    }
    if (twisted)
        for (std::size_t n = 0; n < dim(); ++n)
            if (out[n] != 0.0) out[n] *= twist_factor(twist_rates[n], twist_deadline, t);
    return out;
}

std::optional<Vec> DriftSpec::component_sup() const {
    if (family == DriftFamily::linear_test) return std::nullopt;
    Vec sup(dim());
    for (std::size_t n = 0; n < dim(); ++n) sup[n] = std::abs(component_scale[n]);
    if (twisted) {
        // factor is increasing in t, so over [0,1] the sup sits at t = 1
        for (std::size_t n = 0; n < dim(); ++n)
            sup[n] *= twist_factor(twist_rates[n], twist_deadline, 1.0);
    }
    return sup;
}

std::vector<double> DriftSpec::decay_scales(double gamma, std::size_t dim) {
    std::vector<double> c(dim);
    for (std::size_t n = 0; n < dim; ++n)
        c[n] = std::exp(-std::exp(std::pow(static_cast<double>(n + 1), gamma)));
    return c;
}

DriftSpec DriftSpec::make(DriftFamily family, std::vector<double> scales) {
    DriftSpec d;
    d.family = family;
    d.component_scale = std::move(scales);
    d.validation = family != DriftFamily::linear_test;
    return d;
}

std::vector<SamplePoint> default_validation_grid(const SpectralOperator& op, std::uint64_t seed,
                                                 std::size_t samples) {
    std::vector<SamplePoint> grid;
    const std::size_t d = op.dim();
    // structured corners: origin and +/- stationary-range corners at t in {0, 1/2, 1}
    for (double t : {0.0, 0.5, 1.0}) {
        grid.push_back({t, Vec(d, 0.0)});
        Vec corner(d);
        for (std::size_t n = 0; n < d; ++n) corner[n] = 2.0 / std::sqrt(2.0 * op.lambda(n));
        grid.push_back({t, corner});
        for (double& v : corner) v = -v;
        grid.push_back({t, corner});
    }
    for (std::size_t i = 0; i < samples; ++i) {
        SamplePoint p;
        p.t = uniform01(seed, StreamDomain::scan_points, i, 0, 0);
        p.z.resize(d);
        for (std::size_t n = 0; n < d; ++n) {
            const double sd = std::sqrt(1.0 / (2.0 * op.lambda(n)));
            p.z[n] = sd * normal(seed, StreamDomain::scan_points, i, n + 1, 0);
        }
        grid.push_back(std::move(p));
    }
    return grid;
}

namespace {

// ln of sum_n lambda_n e^{2 lambda_n} s_n^2 evaluated as log-sum-exp.
double weighted_sum_log(const SpectralOperator& op, std::span<const double> s) {
    double max_term = -kInf;
    std::vector<double> terms(s.size(), -kInf);
    for (std::size_t n = 0; n < s.size(); ++n) {
        if (s[n] == 0.0) continue;
        terms[n] = std::log(op.lambda(n)) + 2.0 * op.lambda(n) + 2.0 * std::log(std::abs(s[n]));
        max_term = std::max(max_term, terms[n]);
    }
    if (max_term == -kInf) return -kInf;
    double acc = 0.0;
    for (double term : terms)
        if (term != -kInf) acc += std::exp(term - max_term);
    return max_term + std::log(acc);
}

} // namespace

DecayCertificate validate_assumption(const DriftSpec& drift, const SpectralOperator& op, double gamma,
                                     std::span<const SamplePoint> grid) {
    if (!(gamma > 0.0)) throw std::invalid_argument("validate_assumption: gamma must be > 0");
    if (grid.empty()) throw std::invalid_argument("validate_assumption: empty sample grid");
    if (drift.dim() != op.dim()) throw std::invalid_argument("validate_assumption: dimension mismatch");

    DecayCertificate cert;
    cert.gamma = gamma;

    Vec sup(drift.dim(), 0.0);
    double sup_h = 0.0;
    double weighted = -kInf;
    SamplePoint worst_h{0.0, {}};
    SamplePoint worst_w{0.0, {}};

    if (auto closed = drift.component_sup()) {
        cert.closed_form = true;
        sup = *closed;
        double s = 0.0;
        for (double v : sup) s += v * v;
        sup_h = std::sqrt(s);
        weighted = weighted_sum_log(op, sup);
    } else {
        for (const SamplePoint& p : grid) {
            const Vec f = drift.evaluate(p.t, p.z);
            double s = 0.0;
            for (std::size_t n = 0; n < f.size(); ++n) {
                sup[n] = std::max(sup[n], std::abs(f[n]));
                s += f[n] * f[n];
            }
            if (std::sqrt(s) > sup_h) {
                sup_h = std::sqrt(s);
                worst_h = p;
            }
            const double w = weighted_sum_log(op, f);
            if (w > weighted) {
                weighted = w;
                worst_w = p;
            }
        }
    }

    cert.sup_h_norm = sup_h;
    cert.weighted_log = weighted;
    cert.pass = true;

    double worst_margin = kInf;
    cert.component_log_margin.resize(drift.dim());
    for (std::size_t n = 0; n < drift.dim(); ++n) {
        const double bound_log = -std::exp(std::pow(static_cast<double>(n + 1), gamma));
        const double sup_log = sup[n] == 0.0 ? -kInf : std::log(sup[n]);
        const double margin = bound_log - sup_log; // >= 0 means compliant
        cert.component_log_margin[n] = margin;
        if (margin < 0.0) cert.pass = false;
        if (margin < worst_margin) {
            worst_margin = margin;
            cert.worst = DecayWitness{3, static_cast<unsigned>(n + 1), 0.0, sup_log};
        }
    }
    if (sup_h > 1.0) {
        cert.pass = false;
        cert.worst = DecayWitness{1, 0, worst_h.t, sup_h};
    }
    if (weighted > 0.0) { // ln 1 = 0
        cert.pass = false;
        cert.worst = DecayWitness{2, 0, worst_w.t, weighted};
    }
    return cert;
}

DriftSpec twist(const DriftSpec& drift, const SpectralOperator& op, unsigned n, unsigned k) {
    if (drift.twisted) throw std::invalid_argument("twist: drift is already twisted");
    if (drift.dim() != op.dim()) throw std::invalid_argument("twist: dimension mismatch");
    if (k >= (std::uint64_t{1} << n)) throw std::invalid_argument("twist: need k < 2^n");
    DriftSpec out = drift;
    out.twisted = true;
    out.twist_rates = op.eigenvalues();
    out.twist_deadline = static_cast<double>(k + 1) * std::exp2(-static_cast<double>(n));
    return out;
}

} // namespace rbn
