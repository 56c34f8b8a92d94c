#include "rbn/gronwall.hpp"

#include <cmath>
#include <stdexcept>

namespace rbn {

GronwallSequence run_recursion(double K, unsigned m, double beta0, std::size_t steps) {
    if (!(K >= 0.0)) throw std::invalid_argument("run_recursion: K must be >= 0");
    const double cap_k = std::log(2.0) * std::exp2(static_cast<double>(m));
    if (K > cap_k) throw std::invalid_argument("run_recursion: need K <= ln(2) 2^m");
    if (!(beta0 > 0.0 && beta0 < 1.0)) throw std::invalid_argument("run_recursion: need 0 < beta0 < 1");
    if (steps > (std::size_t{1} << m)) throw std::invalid_argument("run_recursion: need steps <= 2^m");

    GronwallSequence seq;
    seq.K = K;
    seq.m = m;
    seq.beta0 = beta0;
    seq.values.reserve(steps + 1);
    seq.values.push_back(beta0);
    const double scale = K * std::exp2(-static_cast<double>(m));
    double beta = beta0;
    for (std::size_t j = 0; j < steps; ++j) {
        beta = beta * (1.0 + scale * std::log2(1.0 / beta));
        if (!(beta < 1.0)) {
            seq.aborted = true;
            seq.abort_index = j + 1;
            return seq;
        }
        seq.values.push_back(beta);
    }
    return seq;
}

double closed_form_cap(double K, double beta0) {
    if (!(beta0 > 0.0 && beta0 < 1.0)) throw std::invalid_argument("closed_form_cap: need 0 < beta0 < 1");
    if (!(K >= 0.0)) throw std::invalid_argument("closed_form_cap: K must be >= 0");
    return std::exp(std::log2(beta0) * std::exp(-2.0 * K - 1.0));
}

} // namespace rbn
