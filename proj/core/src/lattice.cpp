#include "rbn/lattice.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace rbn {

namespace {

constexpr double kLn2 = 0.6931471805599453;

// Membership of the coordinate k at mesh 2^-m in component n of q, tested as
// ln|k| - m ln 2 <= ln(bound). k = 0 is always a member.
bool coord_in_bound(long long k, unsigned m, double bound_log) {
    if (k == 0) return true;
    const double lhs = std::log(static_cast<double>(k < 0 ? -k : k)) - static_cast<double>(m) * kLn2;
    return lhs <= bound_log;
}

} // namespace

double component_bound_log(double gamma, unsigned n) {
    if (!(gamma >= 1.0)) throw std::invalid_argument("component_bound_log: gamma must be >= 1");
    if (n < 1) throw std::invalid_argument("component_bound_log: n is 1-based");
    // exp overflows to +inf for large n^gamma; the resulting -inf is the
    // correct log-space value ("bound is zero at double precision").
    return kLn2 - std::exp(std::pow(static_cast<double>(n), gamma));
}

double box_bound_log(const QDescriptor& q, unsigned n) {
    const double radius_log = kLn2 - static_cast<double>(q.r) * kLn2; // ln(2 * 2^-r)
    const double decay_log = component_bound_log(q.gamma, n);
    return std::log(static_cast<double>(q.scale)) + std::min(radius_log, decay_log);
}

long long max_coord(const QDescriptor& q, unsigned m, unsigned n) {
    if (m < q.r) throw std::invalid_argument("max_coord: need m >= r");
    const double bound_log = box_bound_log(q, n);
    const double scaled = bound_log + static_cast<double>(m) * kLn2; // ln(bound * 2^m)
    if (scaled < 0.0) return 0;                                      // bound * 2^m < 1
    if (scaled > 62.0 * kLn2)
        throw std::invalid_argument("max_coord: coordinate range exceeds 2^62");
    long long k = static_cast<long long>(std::floor(std::exp(scaled)));
    // Align the integer endpoint with the log-space membership predicate.
    while (!coord_in_bound(k, m, bound_log) && k > 0) --k;
    while (coord_in_bound(k + 1, m, bound_log)) ++k;
    return k;
}

unsigned effective_dimension(const QDescriptor& q, unsigned m) {
    if (m < q.r) throw std::invalid_argument("effective_dimension: need m >= r");
    // Decay bounds are strictly decreasing in n, so scan until the first
    // component that cannot hold a nonzero coordinate.
    unsigned last_nonzero = 0;
    for (unsigned n = 1; n <= 64; ++n) {
        if (max_coord(q, m, n) >= 1)
            last_nonzero = n;
        else
            break;
    }
    return last_nonzero + 1;
}

unsigned effdim_bound(double gamma, unsigned m) {
    const double v = std::pow(std::log(static_cast<double>(m) + 1.0), 1.0 / gamma);
    const double c = std::ceil(v);
    return c < 1.0 ? 1u : static_cast<unsigned>(c);
}

double count_bound_log(const QDescriptor& q, unsigned m) {
    const unsigned d = effective_dimension(q, m);
    const double base = 4.0 * static_cast<double>(q.scale) * std::exp2(static_cast<double>(m) - q.r) + 1.0;
    return static_cast<double>(d) * std::log(base);
}

Vec LatticePoint::to_vector(std::size_t dim) const {
    Vec out(dim, 0.0);
    const double mesh = std::exp2(-static_cast<double>(m));
    for (std::size_t i = 0; i < coords.size() && i < dim; ++i)
        out[i] = static_cast<double>(coords[i]) * mesh;
    return out;
}

BudgetExceeded::BudgetExceeded(double predicted_, std::uint64_t budget_)
    : std::runtime_error("enumerate_lattice: predicted " + std::to_string(predicted_) +
                         " points exceeds budget " + std::to_string(budget_)),
      predicted(predicted_),
      budget(budget_) {}

OutsideDomain::OutsideDomain(unsigned component_, double value_)
    : std::invalid_argument("point outside Q_r at component " + std::to_string(component_) +
                            " (value " + std::to_string(value_) + ")"),
      component(component_),
      value(value_) {}

double lattice_count(const QDescriptor& q, unsigned m) {
    double count = 1.0;
    for (unsigned n = 1;; ++n) {
        const long long k = max_coord(q, m, n);
        if (k == 0) break;
        count *= static_cast<double>(2 * k + 1);
    }
    return count;
}

std::vector<LatticePoint> enumerate_lattice(const QDescriptor& q, unsigned m, std::uint64_t budget) {
    if (m < q.r) throw std::invalid_argument("enumerate_lattice: need m >= r");
    const double predicted = lattice_count(q, m);
    if (predicted > static_cast<double>(budget)) throw BudgetExceeded(predicted, budget);

    std::vector<long long> ranges; // K_n for components that admit nonzero coords
    for (unsigned n = 1;; ++n) {
        const long long k = max_coord(q, m, n);
        if (k == 0) break;
        ranges.push_back(k);
    }

    std::vector<LatticePoint> points;
    points.reserve(static_cast<std::size_t>(predicted));
    std::vector<long long> cursor(ranges.size());
    for (std::size_t i = 0; i < ranges.size(); ++i) cursor[i] = -ranges[i];
    for (;;) {
        points.push_back(LatticePoint{m, cursor});
        // lexicographic increment, last coordinate fastest
        std::size_t i = ranges.size();
        while (i > 0) {
            --i;
            if (cursor[i] < ranges[i]) {
                ++cursor[i];
                for (std::size_t j = i + 1; j < ranges.size(); ++j) cursor[j] = -ranges[j];
                break;
            }
            if (i == 0) return points;
        }
        if (ranges.empty()) return points;
    }
}

LatticePoint project(const QDescriptor& q, unsigned m, std::span<const double> x) {
    if (m < q.r) throw std::invalid_argument("project: need m >= r");
    // Validate membership first (log space), naming the violating component.
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double v = std::abs(x[i]);
        if (v == 0.0) continue;
        if (std::log(v) > box_bound_log(q, static_cast<unsigned>(i + 1)))
            throw OutsideDomain(static_cast<unsigned>(i + 1), x[i]);
    }
    LatticePoint p{m, {}};
    const double mesh_inv = std::exp2(static_cast<double>(m));
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double scaled = std::abs(x[i]) * mesh_inv;
        // nearest integer, half-way cases toward zero
        long long k = static_cast<long long>(std::ceil(scaled - 0.5));
        const long long cap = max_coord(q, m, static_cast<unsigned>(i + 1));
        if (k > cap) k = cap;
        if (x[i] < 0.0) k = -k;
        p.coords.push_back(k);
    }
    while (!p.coords.empty() && p.coords.back() == 0) p.coords.pop_back();
    return p;
}

bool check_log_subadditivity(double gamma, unsigned long r, unsigned long m) {
    if (!(gamma >= 1.0)) throw std::invalid_argument("check_log_subadditivity: gamma must be >= 1");
    const double e = 1.0 / gamma;
    const double lhs = std::pow(std::log(static_cast<double>(r + m) + 1.0), e);
    const double rhs = std::pow(std::log(static_cast<double>(r) + 1.0), e) +
                       std::pow(std::log(static_cast<double>(m) + 1.0), e);
    return lhs <= rhs;
}

} // namespace rbn
