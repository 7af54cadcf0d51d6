#ifndef SHNOL_TAIL_HPP
#define SHNOL_TAIL_HPP

// Weighted tail F(r) = sum_{n=n0+1}^{r} a_{n-1}^2 y_n^2 and the search for the
// right edges r at which F grows slowly over [r-2, r+4]:
//     F(r+4) < e^{2 beta + delta1} F(r-2).

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "shnol/coeffs.hpp"
#include "shnol/errors.hpp"
#include "shnol/recurrence.hpp"

namespace shnol {

namespace detail {

inline double log_add_exp(double x, double y) {
    if (x == -std::numeric_limits<double>::infinity()) return y;
    if (y == -std::numeric_limits<double>::infinity()) return x;
    const double hi = std::max(x, y);
    return hi + std::log1p(std::exp(-std::abs(x - y)));
}

}  // namespace detail

/// Prefix sums kept as logarithms; log_F[r - n0] = log F(r), F(n0) = 0.
struct TailWeight {
    std::int64_t n0 = 0;
    std::vector<double> log_F;

    std::int64_t r_max() const noexcept { return n0 + static_cast<std::int64_t>(log_F.size()) - 1; }
    double log(std::int64_t r) const {
        if (r < n0 || r > r_max()) throw IndexOutOfRange(r, "tail weight index outside [n0, r_max]");
        return log_F[static_cast<std::size_t>(r - n0)];
    }
    double F(std::int64_t r) const { return std::exp(log(r)); }

    /// Wraps given values F(n0), F(n0+1), ...
    static TailWeight from_values(std::int64_t n0, const std::vector<double>& F) {
        TailWeight t;
        t.n0 = n0;
        for (double f : F) t.log_F.push_back(f > 0.0 ? std::log(f) : -std::numeric_limits<double>::infinity());
        return t;
    }
};

inline TailWeight tail_weight(const CoefficientModel& model, const RecurrenceSolution& sol, std::int64_t n0,
                              std::int64_t r_max) {
    if (n0 + 1 < sol.first_index() || r_max > sol.last_index() || r_max < n0)
        throw IndexOutOfRange(r_max, "tail_weight: [n0+1, r_max] must lie inside the solution");
    TailWeight t;
    t.n0 = n0;
    t.log_F.reserve(static_cast<std::size_t>(r_max - n0 + 1));
    double acc = -std::numeric_limits<double>::infinity();
    t.log_F.push_back(acc);
    for (std::int64_t n = n0 + 1; n <= r_max; ++n) {
        if (n >= sol.first_index() && sol.mantissa(n) != 0.0) {
            const double la = model.log_a(n - 1);
            if (la != -std::numeric_limits<double>::infinity())
                acc = detail::log_add_exp(acc, 2.0 * la + 2.0 * sol.log_abs(n));
        }
        t.log_F.push_back(acc);
    }
    return t;
}

struct PigeonholeResult {
    std::vector<std::int64_t> hits;  ///< every tested r satisfying the strict inequality
    std::int64_t first_tested = 0;
    std::int64_t horizon = 0;        ///< last tested r (F is needed up to horizon + 4)
};

/// Finite prefix of the r >= r_min with F(r+4) < e^{2 beta + delta1} F(r-2).
inline PigeonholeResult pigeonhole_sequence(const TailWeight& F, double beta, double delta1, std::int64_t r_min) {
    if (!(delta1 > 0.0)) throw std::invalid_argument("pigeonhole_sequence: delta1 must be > 0");
    PigeonholeResult out;
    out.first_tested = std::max(r_min, F.n0 + 2);
    out.horizon = F.r_max() - 4;
    const double slack = 2.0 * beta + delta1;
    for (std::int64_t r = out.first_tested; r <= out.horizon; ++r)
        if (F.log(r + 4) < slack + F.log(r - 2)) out.hits.push_back(r);
    return out;
}

}  // namespace shnol

#endif  // SHNOL_TAIL_HPP
