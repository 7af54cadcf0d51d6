#ifndef SHNOL_APRIORI_HPP
#define SHNOL_APRIORI_HPP

// A-priori bound on differences of an arbitrary sequence y when the couplings
// vary slowly, |a_k - a_{k-1}| <= C1 a_{k-1} for k >= m - 1:
//
//   sum_{k=r}^{s} a_{k-1}^2 (y_k - y_{k-1})^2 <= 2 (1 + (C1 + 1)^2) sum_{k=m-1}^{n} a_{k-1}^2 y_k^2
//
// for m <= r <= s <= n. Also the C-free shape (e^{2 beta} - 1)^{1/2} of the
// distance bound for exponentially bounded solutions.

#include <cmath>
#include <cstdint>
#include <vector>

#include "shnol/errors.hpp"
#include "shnol/jacobi_operator.hpp"

namespace shnol {

struct AprioriCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

/// max_k |a_k - a_{k-1}| / a_{k-1} over k in [k_lo, k_hi].
inline double measure_C1(const IndexedSequence& a, std::int64_t k_lo, std::int64_t k_hi) {
    double c1 = 0.0;
    for (std::int64_t k = k_lo; k <= k_hi; ++k) c1 = std::max(c1, std::abs(a[k] - a[k - 1]) / a[k - 1]);
    return c1;
}

/// Evaluates both sides. The slow-variation hypothesis is verified on
/// k in [m-1, n-1], the range the bound relies on.
inline AprioriCheck theorem4_check(const IndexedSequence& a, const IndexedSequence& y, double C1, std::int64_t m,
                                   std::int64_t r, std::int64_t s, std::int64_t n) {
    if (!(m <= r && r <= s && s <= n)) throw std::invalid_argument("theorem4_check: need m <= r <= s <= n");
    if (!(C1 >= 0.0)) throw std::invalid_argument("theorem4_check: C1 must be >= 0");
    for (std::int64_t k = m - 1; k <= n - 1; ++k)
        if (!(std::abs(a[k] - a[k - 1]) / a[k - 1] <= C1))
            throw HypothesisViolated(k, "|a_k - a_{k-1}| <= C1 a_{k-1} fails");

    AprioriCheck out;
    for (std::int64_t k = r; k <= s; ++k) {
        const double d = a[k - 1] * (y[k] - y[k - 1]);
        out.lhs += d * d;
    }
    double weighted = 0.0;
    for (std::int64_t k = m - 1; k <= n; ++k) {
        const double t = a[k - 1] * y[k];
        weighted += t * t;
    }
    out.rhs = 2.0 * (1.0 + (C1 + 1.0) * (C1 + 1.0)) * weighted;
    out.holds = out.lhs <= out.rhs;
    return out;
}

/// (e^{2 beta} - 1)^{1/2} per grid point.
inline std::vector<double> shnol_bound_curve(const std::vector<double>& betas) {
    std::vector<double> out;
    out.reserve(betas.size());
    for (double beta : betas) {
        if (!(beta >= 0.0)) throw std::invalid_argument("shnol_bound_curve: beta must be >= 0");
        out.push_back(std::sqrt(std::expm1(2.0 * beta)));
    }
    return out;
}

}  // namespace shnol

#endif  // SHNOL_APRIORI_HPP
