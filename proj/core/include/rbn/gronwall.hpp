#pragma once

#include <cstddef>
#include <vector>

namespace rbn {

/// The extremal discrete log-type Gronwall recursion
///   beta_{j+1} = beta_j (1 + K 2^-m log2(1 / beta_j))
/// run with equality (the largest sequence the hypothesis admits).
struct GronwallSequence {
    double K = 0.0;
    unsigned m = 0;
    double beta0 = 0.0;
    std::vector<double> values; // beta_0 .. beta_steps (truncated on abort)
    bool aborted = false;       // some beta_j reached 1
    std::size_t abort_index = 0;
};

/// Preconditions checked individually: K >= 0 (K = 0 admitted as the
/// degenerate constant case), K <= ln(2) 2^m, 0 < beta0 < 1, steps <= 2^m.
/// Mid-run beta_j >= 1 stops the recursion and reports the index.
GronwallSequence run_recursion(double K, unsigned m, double beta0, std::size_t steps);

/// Closed-form cap exp(log2(beta0) e^{-2K-1}); every recursion iterate stays
/// below it while the 0 < beta_j < 1 hypothesis holds.
double closed_form_cap(double K, double beta0);

} // namespace rbn
