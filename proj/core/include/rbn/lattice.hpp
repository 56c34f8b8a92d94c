#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "rbn/spectral.hpp"

namespace rbn {

/// Parameters of the box Q_r (decay exponent gamma, radius exponent r) and of
/// its doubled copy 2Q_r (scale = 2). Componentwise,
///   |x_n| <= scale * min(2 * 2^-r, 2 * exp(-e^{n^gamma})).
/// The raw decay bound underflows doubles already at n = 2 for gamma > 6, so
/// every membership test here works with logarithms of the bounds.
struct QDescriptor {
    double gamma = 1.0;
    unsigned r = 0;
    unsigned scale = 1; // 1 for Q_r, 2 for 2Q_r

    QDescriptor(double gamma_, unsigned r_, unsigned scale_ = 1)
        : gamma(gamma_), r(r_), scale(scale_) {
        if (!(gamma >= 1.0)) throw std::invalid_argument("QDescriptor: gamma must be >= 1");
        if (scale != 1 && scale != 2) throw std::invalid_argument("QDescriptor: scale must be 1 or 2");
    }
};

/// ln of the decay bound 2 exp(-e^{n^gamma}); n is the 1-based component index.
double component_bound_log(double gamma, unsigned n);

/// ln of the full componentwise box bound of q for component n (1-based),
/// including the radius cap and the scale factor. May be -inf.
double box_bound_log(const QDescriptor& q, unsigned n);

/// Largest integer K with K * 2^-m inside the component-n bound of q,
/// consistent with the log-space membership predicate.
long long max_coord(const QDescriptor& q, unsigned m, unsigned n);

/// Brute-force effective dimension of the 2^-m lattice of q: one plus the
/// largest component index that admits a nonzero lattice coordinate (1 if
/// none does). Requires m >= r.
unsigned effective_dimension(const QDescriptor& q, unsigned m);

/// Closed-form bound max(1, ceil((ln(m+1))^{1/gamma})). The ceiling is needed:
/// the bare (ln(m+1))^{1/gamma} is undercut by small instances (for example
/// gamma = 1, m = 10 has brute-force dimension 3 > ln 11), while the vanishing
/// argument behind it only forces components with index >= that value to zero.
unsigned effdim_bound(double gamma, unsigned m);

/// ln of the lattice counting bound (4 * scale * 2^{m-r} + 1)^{ed}.
double count_bound_log(const QDescriptor& q, unsigned m);

/// Integer-coordinate lattice point: component n equals coords[n-1] * 2^-m.
/// Components beyond the stored coordinates are zero.
struct LatticePoint {
    unsigned m = 0;
    std::vector<long long> coords;

    Vec to_vector(std::size_t dim) const;
};

struct BudgetExceeded : std::runtime_error {
    BudgetExceeded(double predicted_, std::uint64_t budget_);
    double predicted;
    std::uint64_t budget;
};

struct OutsideDomain : std::invalid_argument {
    OutsideDomain(unsigned component_, double value_);
    unsigned component;
    double value;
};

/// Exact number of points in the 2^-m lattice of q (per-component product of
/// coordinate ranges). Cheap; does not materialize the lattice.
double lattice_count(const QDescriptor& q, unsigned m);

/// Exhaustive enumeration in lexicographic coordinate order. Refuses with
/// BudgetExceeded when the predicted count is above the budget.
std::vector<LatticePoint> enumerate_lattice(const QDescriptor& q, unsigned m,
                                            std::uint64_t budget = 10'000'000);

/// Componentwise nearest-lattice projection, ties broken toward zero. The
/// input must lie in q (log-space validated; OutsideDomain names the first
/// violating component). The result is within 2^-m in |.|_inf and no lattice
/// point is strictly closer.
LatticePoint project(const QDescriptor& q, unsigned m, std::span<const double> x);

/// ln(r+m+1)^{1/gamma} <= ln(r+1)^{1/gamma} + ln(m+1)^{1/gamma}; holds for all
/// r, m >= 0 and gamma >= 1.
bool check_log_subadditivity(double gamma, unsigned long r, unsigned long m);

} // namespace rbn
