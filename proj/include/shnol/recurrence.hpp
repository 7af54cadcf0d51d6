#ifndef SHNOL_RECURRENCE_HPP
#define SHNOL_RECURRENCE_HPP

// Forward solution of the three-term recurrence at fixed real lambda, in the
// self-adjoint form (eq1) or in the Jacobi form obtained by y_n -> (-1)^n y_n
// (eq2). Values are stored as mantissa * 2^exponent so that solutions growing
// like e^{beta n} or faster stay representable for any N.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <ostream>
#include <vector>

#include "shnol/coeffs.hpp"
#include "shnol/csv.hpp"
#include "shnol/errors.hpp"

namespace shnol {

/// eq1: -a_n y_{n+1} - a_{n-1} y_{n-1} + d_n y_n = lambda y_n
/// eq2:  a_n y_{n+1} + a_{n-1} y_{n-1} + d_n y_n = lambda y_n
/// with d_n = b_n + a_n + a_{n-1}.
enum class Form { eq1, eq2 };

constexpr Form toggled(Form f) noexcept { return f == Form::eq1 ? Form::eq2 : Form::eq1; }
constexpr double off_diagonal_sign(Form f) noexcept { return f == Form::eq1 ? -1.0 : 1.0; }

inline std::string_view to_string(Form f) { return f == Form::eq1 ? "eq1" : "eq2"; }

inline constexpr double kRescaleCap = 1e100;

/// y_n = mantissas[i] * 2^exponents[i] for n = start_index + i; y_{start-1} = 0.
struct RecurrenceSolution {
    double lambda = 0.0;
    Form form = Form::eq1;
    std::int64_t start_index = 0;
    std::vector<double> mantissas;
    std::vector<std::int64_t> exponents;

    std::int64_t first_index() const noexcept { return start_index; }
    std::int64_t last_index() const noexcept {
        return start_index + static_cast<std::int64_t>(mantissas.size()) - 1;
    }
    bool contains(std::int64_t n) const noexcept { return n >= first_index() && n <= last_index(); }

    double mantissa(std::int64_t n) const { return mantissas[at(n)]; }
    std::int64_t exponent(std::int64_t n) const { return exponents[at(n)]; }
    /// Natural-log scale s_n with y_n = m_n e^{s_n}.
    double log_scale(std::int64_t n) const { return static_cast<double>(exponent(n)) * std::numbers::ln2; }

    double log_abs(std::int64_t n) const {
        const double m = mantissa(n);
        if (m == 0.0) return -std::numeric_limits<double>::infinity();
        return std::log(std::abs(m)) + log_scale(n);
    }

    /// y_n * 2^{-ref}; exact when the result is a normal double.
    double scaled(std::int64_t n, std::int64_t ref) const {
        const std::int64_t shift = exponent(n) - ref;
        if (shift < -2000) return 0.0;
        if (shift > 2000) return std::copysign(std::numeric_limits<double>::infinity(), mantissa(n));
        return std::ldexp(mantissa(n), static_cast<int>(shift));
    }

    /// y_n as a plain double (may overflow to +-inf).
    double value(std::int64_t n) const { return scaled(n, 0); }

private:
    std::size_t at(std::int64_t n) const {
        if (!contains(n)) throw IndexOutOfRange(n, "solution index outside the computed range");
        return static_cast<std::size_t>(n - start_index);
    }
};

namespace detail {

inline void renormalize(double& prev, double& cur, std::int64_t& exponent) {
    const double big = std::max(std::abs(prev), std::abs(cur));
    if (big == 0.0 || !std::isfinite(big)) return;
    const int k = std::ilogb(big);
    prev = std::ldexp(prev, -k);
    cur = std::ldexp(cur, -k);
    exponent += k;
}

}  // namespace detail

/// Solves the recurrence forward from y_{start-1} = 0, y_start = 1 and returns
/// y_n for start <= n <= start + N.
///
/// Every rescale_period steps the working pair is renormalized by a power of
/// two, and additionally whenever a mantissa leaves [1/cap, cap]. Power-of-two
/// scaling commutes with the arithmetic, so the reconstructed values do not
/// depend on the period.
inline RecurrenceSolution solve(const CoefficientModel& model, double lambda, Form form, std::int64_t N,
                                std::int64_t rescale_period = 1) {
    if (N < 2) throw std::invalid_argument("solve: N must be >= 2");
    if (rescale_period < 1) throw std::invalid_argument("solve: rescale_period must be >= 1");
    const std::int64_t s = model.start_index();
    if (s + N - 1 > model.last_site())
        throw IndexOutOfRange(s + N - 1, "solve: model does not cover the requested range");

    RecurrenceSolution sol;
    sol.lambda = lambda;
    sol.form = form;
    sol.start_index = s;
    sol.mantissas.reserve(static_cast<std::size_t>(N + 1));
    sol.exponents.reserve(static_cast<std::size_t>(N + 1));

    double prev = 0.0;
    double cur = 1.0;
    std::int64_t exponent = 0;
    sol.mantissas.push_back(cur);
    sol.exponents.push_back(exponent);

    double a_left = model.a_raw(s - 1);
    for (std::int64_t n = s; n < s + N; ++n) {
        const double a_right = model.a_raw(n);
        if (a_right == 0.0) throw Breakdown("a_n = 0 at n=" + std::to_string(n) + ": recurrence cannot advance");
        if (!(a_right > 0.0) || !std::isfinite(a_right)) throw NonPositiveCoefficient(n, a_right);
        const double shifted = model.diagonal(n) - lambda;
        double next = form == Form::eq1 ? (shifted * cur - a_left * prev) / a_right
                                        : (-shifted * cur - a_left * prev) / a_right;
        prev = cur;
        cur = next;
        const std::int64_t step = n - s + 1;
        const double mag = std::abs(cur);
        if (step % rescale_period == 0 || mag > kRescaleCap ||
            (std::max(mag, std::abs(prev)) < 1.0 / kRescaleCap)) {
            detail::renormalize(prev, cur, exponent);
        }
        if (!std::isfinite(cur)) throw Breakdown("non-finite value at n=" + std::to_string(n + 1));
        sol.mantissas.push_back(cur);
        sol.exponents.push_back(exponent);
        a_left = a_right;
    }
    return sol;
}

/// Orthonormal polynomials p(n; lambda), 0 <= n - start <= N: the eq2 solution
/// with p(start-1) = 0, p(start) = 1.
inline RecurrenceSolution orthonormal_polynomials(const CoefficientModel& model, double lambda, std::int64_t N) {
    return solve(model, lambda, Form::eq2, N, 1);
}

/// y_n -> (-1)^n y_n, toggling the recurrence form. An involution.
inline RecurrenceSolution gauge_map(RecurrenceSolution sol) {
    for (std::int64_t n = sol.first_index(); n <= sol.last_index(); ++n)
        if (n % 2 != 0) {
            auto& m = sol.mantissas[static_cast<std::size_t>(n - sol.start_index)];
            m = -m;
        }
    sol.form = toggled(sol.form);
    return sol;
}

/// Largest relative residual |LHS - lambda y_n| / (|a_n y_{n+1}| + |a_{n-1} y_{n-1}| + |d_n y_n|)
/// over the sites whose three values are available.
inline double max_relative_residual(const CoefficientModel& model, const RecurrenceSolution& sol) {
    double worst = 0.0;
    const double sgn = off_diagonal_sign(sol.form);
    for (std::int64_t n = sol.first_index(); n < sol.last_index(); ++n) {
        const std::int64_t ref = sol.exponent(n);
        const double y0 = n == sol.first_index() ? 0.0 : sol.scaled(n - 1, ref);
        const double y1 = sol.scaled(n, ref);
        const double y2 = sol.scaled(n + 1, ref);
        const double a_l = model.a_raw(n - 1);
        const double a_r = model.a_raw(n);
        const double d = model.diagonal(n);
        const double lhs = sgn * (a_r * y2 + a_l * y0) + d * y1;
        const double scale = std::abs(a_r * y2) + std::abs(a_l * y0) + std::abs(d * y1);
        if (scale == 0.0) continue;
        worst = std::max(worst, std::abs(lhs - sol.lambda * y1) / scale);
    }
    return worst;
}

/// Fitted growth of a solution on an index window.
///
/// The regression target is the running maximum of log|y_j| over
/// start <= j <= n, an upper envelope of |y_n| that stays finite at the zeros
/// of oscillating solutions. Slopes are least-squares fits of that envelope
/// against n (exponential rate) and log n (polynomial degree); the prefactors
/// are then lifted so that each bound holds at every nonzero window point.
struct GrowthEstimate {
    double beta_hat = 0.0;
    double theta_hat = 0.0;
    double log_C2 = 0.0;  ///< |y_n| <= C2 e^{beta_hat n}
    double log_C3 = 0.0;  ///< |y_n| <= C3 e^{beta_probe n}
    double log_C4 = 0.0;  ///< |y_n| <= C4 n^{theta_hat}
    double beta_probe = 1e-3;
    std::int64_t n_lo = 0;
    std::int64_t n_hi = 0;
    double exp_rms = 0.0;
    double poly_rms = 0.0;
    double residual_rms = 0.0;  ///< smaller of the two fits
    bool polynomial_preferred = false;

    double C2_hat() const { return std::exp(log_C2); }
    double C3_hat() const { return std::exp(log_C3); }
    double C4_hat() const { return std::exp(log_C4); }
};

namespace detail {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms = 0.0;
};

inline LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    LineFit fit;
    const auto count = static_cast<double>(x.size());
    if (x.empty()) return fit;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= count;
    my /= count;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    fit.intercept = my - fit.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * x[i]);
        ss += r * r;
    }
    fit.rms = std::sqrt(ss / count);
    return fit;
}

}  // namespace detail

inline GrowthEstimate estimate_growth(const RecurrenceSolution& sol, std::int64_t n_lo, std::int64_t n_hi,
                                      double beta_probe = 1e-3) {
    if (n_hi - n_lo + 1 < 16) throw DegenerateWindow("growth window must contain at least 16 sites");
    if (!sol.contains(n_lo) || !sol.contains(n_hi)) throw DegenerateWindow("growth window outside the solution");

    double envelope = -std::numeric_limits<double>::infinity();
    for (std::int64_t j = sol.first_index(); j < n_lo; ++j) envelope = std::max(envelope, sol.log_abs(j));

    std::vector<double> ns, logns, env, raw_n, raw_log;
    std::int64_t zeros = 0;
    for (std::int64_t n = n_lo; n <= n_hi; ++n) {
        const double la = sol.log_abs(n);
        envelope = std::max(envelope, la);
        if (sol.mantissa(n) == 0.0) {
            ++zeros;
            continue;
        }
        raw_n.push_back(static_cast<double>(n));
        raw_log.push_back(la);
        ns.push_back(static_cast<double>(n));
        env.push_back(envelope);
    }
    if (2 * zeros > n_hi - n_lo + 1) throw DegenerateWindow("more than half of the window values vanish");

    GrowthEstimate g;
    g.beta_probe = beta_probe;
    g.n_lo = n_lo;
    g.n_hi = n_hi;

    const auto exp_fit = detail::least_squares(ns, env);
    g.beta_hat = std::max(0.0, exp_fit.slope);
    g.exp_rms = exp_fit.rms;

    std::vector<double> poly_x, poly_y;
    for (std::size_t i = 0; i < ns.size(); ++i)
        if (ns[i] >= 1.0) {
            poly_x.push_back(std::log(ns[i]));
            poly_y.push_back(env[i]);
        }
    const auto poly_fit = detail::least_squares(poly_x, poly_y);
    g.theta_hat = poly_fit.slope;
    g.poly_rms = poly_x.size() >= 2 ? poly_fit.rms : std::numeric_limits<double>::infinity();

    g.polynomial_preferred = g.poly_rms <= g.exp_rms;
    g.residual_rms = std::min(g.exp_rms, g.poly_rms);

    const double ninf = -std::numeric_limits<double>::infinity();
    g.log_C2 = g.log_C3 = g.log_C4 = ninf;
    for (std::size_t i = 0; i < raw_n.size(); ++i) {
        g.log_C2 = std::max(g.log_C2, raw_log[i] - g.beta_hat * raw_n[i]);
        g.log_C3 = std::max(g.log_C3, raw_log[i] - beta_probe * raw_n[i]);
        if (raw_n[i] >= 1.0) g.log_C4 = std::max(g.log_C4, raw_log[i] - g.theta_hat * std::log(raw_n[i]));
    }
    return g;
}

/// CSV columns n, mantissa, log_scale, log_abs_y.
inline void write_csv(std::ostream& os, const RecurrenceSolution& sol) {
    csv::row(os, "n", "mantissa", "log_scale", "log_abs_y");
    for (std::int64_t n = sol.first_index(); n <= sol.last_index(); ++n)
        csv::row(os, n, sol.mantissa(n), sol.log_scale(n), sol.log_abs(n));
}

}  // namespace shnol

#endif  // SHNOL_RECURRENCE_HPP
