#ifndef SHNOL_CLASSIFY_HPP
#define SHNOL_CLASSIFY_HPP

// Finite-horizon checks of the standing hypotheses on the couplings a_n:
// slow variation |a_n - a_{n-1}| <= C1 a_{n-1}, at most exponential growth of
// sum a_{k-1}^2, and limit-point status through the Carleman series.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "shnol/coeffs.hpp"
#include "shnol/csv.hpp"
#include "shnol/recurrence.hpp"
#include "shnol/tail.hpp"

namespace shnol {

struct DeltaACheck {
    double C1_hat = 0.0;            ///< max over (n0, N] of |a_n - a_{n-1}| / a_{n-1}
    double C1_reference = 0.0;      ///< bound the tail is tested against
    double first_half_max = 0.0;
    double second_half_max = 0.0;
    bool increasing = false;        ///< second-half maximum exceeds twice the first-half maximum
    std::optional<std::int64_t> first_violation;
};

/// Ratios are formed as expm1(log a_n - log a_{n-1}), exact for geometric
/// sequences and free of overflow for fast-growing ones. Without an explicit
/// C1 the tail is tested against twice the first-half maximum.
inline DeltaACheck check_delta_a(const CoefficientModel& model, std::int64_t n0, std::int64_t N,
                                 std::optional<double> C1 = std::nullopt) {
    if (!(N > n0 + 1)) throw std::invalid_argument("check_delta_a: need N > n0 + 1");
    const std::int64_t mid = n0 + (N - n0) / 2;
    std::vector<double> ratio;
    ratio.reserve(static_cast<std::size_t>(N - n0));
    DeltaACheck out;
    for (std::int64_t n = n0 + 1; n <= N; ++n) {
        const double r = std::abs(std::expm1(model.log_a(n) - model.log_a(n - 1)));
        const double v = std::isnan(r) ? std::numeric_limits<double>::infinity() : r;
        ratio.push_back(v);
        out.C1_hat = std::max(out.C1_hat, v);
        if (n <= mid)
            out.first_half_max = std::max(out.first_half_max, v);
        else
            out.second_half_max = std::max(out.second_half_max, v);
    }
    out.increasing = out.second_half_max > 2.0 * out.first_half_max;
    out.C1_reference = C1.value_or(2.0 * out.first_half_max);
    for (std::size_t i = 0; i < ratio.size(); ++i)
        if (ratio[i] > out.C1_reference) {
            out.first_violation = n0 + 1 + static_cast<std::int64_t>(i);
            break;
        }
    return out;
}

struct GammaFit {
    double gamma_hat = 0.0;
    double log_L_hat = 0.0;  ///< sum_{k=n0+1}^{n} a_{k-1}^2 <= L e^{gamma n} on the tested range
    double first_half_slope = 0.0;
    double second_half_slope = 0.0;
    bool growth_ok = false;  ///< log prefix sums grow at most linearly

    double L_hat() const { return std::exp(log_L_hat); }
};

inline GammaFit fit_gamma(const CoefficientModel& model, std::int64_t n0, std::int64_t N) {
    if (!(N > n0 + 1)) throw std::invalid_argument("fit_gamma: need N > n0 + 1");
    std::vector<double> xs, ys;
    double acc = -std::numeric_limits<double>::infinity();
    for (std::int64_t n = n0 + 1; n <= N; ++n) {
        const double la = model.log_a(n - 1);
        if (la != -std::numeric_limits<double>::infinity()) acc = detail::log_add_exp(acc, 2.0 * la);
        if (acc == -std::numeric_limits<double>::infinity()) continue;
        xs.push_back(static_cast<double>(n));
        ys.push_back(acc);
    }
    GammaFit out;
    if (xs.size() < 4) return out;
    out.gamma_hat = std::max(0.0, detail::least_squares(xs, ys).slope);
    out.log_L_hat = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < xs.size(); ++i)
        out.log_L_hat = std::max(out.log_L_hat, ys[i] - out.gamma_hat * xs[i]);

    const std::size_t half = xs.size() / 2;
    const std::vector<double> x1(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(half));
    const std::vector<double> y1(ys.begin(), ys.begin() + static_cast<std::ptrdiff_t>(half));
    const std::vector<double> x2(xs.begin() + static_cast<std::ptrdiff_t>(half), xs.end());
    const std::vector<double> y2(ys.begin() + static_cast<std::ptrdiff_t>(half), ys.end());
    out.first_half_slope = detail::least_squares(x1, y1).slope;
    out.second_half_slope = detail::least_squares(x2, y2).slope;
    out.growth_ok = std::isfinite(out.log_L_hat) && std::isfinite(out.gamma_hat) &&
                    out.second_half_slope <= 1.5 * std::max(out.first_half_slope, 0.0) + 1e-3;
    return out;
}

enum class LimitPoint { yes_by_carleman, inconclusive };

inline std::string_view to_string(LimitPoint lp) {
    return lp == LimitPoint::yes_by_carleman ? "yes_by_carleman" : "inconclusive";
}

struct CarlemanOptions {
    double min_sum = 10.0;      ///< partial sum must exceed this
    double min_decade_gain = 1.0;  ///< and still grow this much over the last decade
};

struct CarlemanResult {
    LimitPoint verdict = LimitPoint::inconclusive;
    double partial_sum = 0.0;
    double last_decade_gain = 0.0;
};

/// Partial sums of 1/a_n over [start, N]. Divergence of the full series
/// implies the limit-point case; a finite horizon only supports a heuristic
/// "yes", never a limit-circle verdict.
inline CarlemanResult carleman(const CoefficientModel& model, std::int64_t N, CarlemanOptions opt = {}) {
    if (N < 2) throw std::invalid_argument("carleman: N must be >= 2");
    const std::int64_t s = model.start_index();
    const std::int64_t decade = std::max(s, N / 10);
    CarlemanResult out;
    double at_decade = 0.0;
    for (std::int64_t n = s; n <= N; ++n) {
        out.partial_sum += std::exp(-model.log_a(n));
        if (n == decade) at_decade = out.partial_sum;
    }
    out.last_decade_gain = out.partial_sum - at_decade;
    if (out.partial_sum > opt.min_sum && out.last_decade_gain > opt.min_decade_gain)
        out.verdict = LimitPoint::yes_by_carleman;
    return out;
}

struct HypothesisReport {
    std::int64_t n0 = 0;
    std::int64_t N = 0;
    double C1_hat = 0.0;
    bool C1_ok = false;
    bool C1_increasing = false;
    std::optional<std::int64_t> first_violation;
    double gamma_hat = 0.0;
    double log_L_hat = 0.0;
    bool growth_ok = false;
    LimitPoint limit_point = LimitPoint::inconclusive;
    double carleman_sum = 0.0;

    bool eligible() const { return C1_ok && growth_ok && limit_point == LimitPoint::yes_by_carleman; }
};

/// n0 defaults to start_index + 1.
inline HypothesisReport hypothesis_report(const CoefficientModel& model, std::optional<std::int64_t> n0, std::int64_t N,
                                          std::optional<double> C1 = std::nullopt, CarlemanOptions opt = {}) {
    HypothesisReport rep;
    rep.n0 = n0.value_or(model.start_index() + 1);
    rep.N = N;
    const auto da = check_delta_a(model, rep.n0, N, C1);
    rep.C1_hat = da.C1_hat;
    rep.C1_increasing = da.increasing;
    rep.first_violation = da.first_violation;
    rep.C1_ok = std::isfinite(da.C1_hat) && !da.first_violation;
    const auto g = fit_gamma(model, rep.n0, N);
    rep.gamma_hat = g.gamma_hat;
    rep.log_L_hat = g.log_L_hat;
    rep.growth_ok = g.growth_ok;
    const auto c = carleman(model, N, opt);
    rep.limit_point = c.verdict;
    rep.carleman_sum = c.partial_sum;
    return rep;
}

inline void write_key_values(std::ostream& os, const HypothesisReport& r) {
    os << "n0=" << r.n0 << '\n'
       << "tested_range=" << r.n0 + 1 << ":" << r.N << '\n'
       << "C1_hat=" << csv::format(r.C1_hat) << '\n'
       << "C1_ok=" << (r.C1_ok ? "true" : "false") << '\n'
       << "C1_increasing=" << (r.C1_increasing ? "true" : "false") << '\n'
       << "first_violation=" << (r.first_violation ? std::to_string(*r.first_violation) : "none") << '\n'
       << "gamma_hat=" << csv::format(r.gamma_hat) << '\n'
       << "log_L_hat=" << csv::format(r.log_L_hat) << '\n'
       << "growth_ok=" << (r.growth_ok ? "true" : "false") << '\n'
       << "limit_point=" << to_string(r.limit_point) << '\n'
       << "carleman_sum=" << csv::format(r.carleman_sum) << '\n'
       << "eligible=" << (r.eligible() ? "true" : "false") << '\n';
}

inline void write_report_csv_header(std::ostream& os) {
    csv::row(os, "n0", "N", "C1_hat", "C1_ok", "first_violation", "gamma_hat", "log_L_hat", "growth_ok",
             "limit_point", "carleman_sum", "eligible");
}

inline void write_report_csv_row(std::ostream& os, const HypothesisReport& r) {
    csv::row(os, r.n0, r.N, r.C1_hat, r.C1_ok, r.first_violation ? std::to_string(*r.first_violation) : "",
             r.gamma_hat, r.log_L_hat, r.growth_ok, to_string(r.limit_point), r.carleman_sum, r.eligible());
}

}  // namespace shnol

#endif  // SHNOL_CLASSIFY_HPP
