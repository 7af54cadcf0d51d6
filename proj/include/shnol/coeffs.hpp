#ifndef SHNOL_COEFFS_HPP
#define SHNOL_COEFFS_HPP

// Coefficient sequences a_{n-1} > 0, b_n of the self-adjoint three-term
// difference equation
//
//     -a_n y_{n+1} - a_{n-1} y_{n-1} + (b_n + a_n + a_{n-1}) y_n = lambda y_n.
//
// Closed-form families are evaluated lazily; tabulated models own their
// tables. A model is immutable once built.

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "shnol/errors.hpp"

namespace shnol {

enum class Family { constant, power, exponential, wimp, tabulated };

inline std::string_view to_string(Family f) {
    switch (f) {
        case Family::constant: return "constant";
        case Family::power: return "power";
        case Family::exponential: return "exponential";
        case Family::wimp: return "wimp";
        case Family::tabulated: return "tabulated";
    }
    return "?";
}

/// Sequences a_n, b_n on the lattice n >= start_index.
///
/// Indexing follows the difference equation: site n couples to n+1 through
/// a_n, and its diagonal b_n + a_n + a_{n-1} involves the left coupling
/// a_{n-1}. At the first site the left coupling a_{start-1} only enters the
/// diagonal (the Dirichlet value y_{start-1} = 0 kills the off-diagonal term),
/// so it may be zero ("degenerate left edge", as in the Wimp example where
/// a_0 = 0). Every a_n with n >= start_index is strictly positive.
///
/// Family parameters:
///   constant     [a = 1, b = 0]          a_n = a, b_n = b
///   power        [p, b = 0]              a_n = (n+1)^p, b_n = b
///   exponential  [c, b = 0, q = 0]       a_n = exp(c n + q n^2), b_n = b
///   wimp         []                      a_n = sqrt(n(n+1)), b_n + a_n + a_{n-1} = 2n, start 1
///   tabulated    a_table[k] = a_{start-1+k}, b_table[k] = b_{start+k}
class CoefficientModel {
public:
    /// Largest site index served by closed-form families.
    static constexpr std::int64_t kUnboundedSite = std::int64_t{1} << 50;

    static CoefficientModel constant(double a = 1.0, double b = 0.0) {
        CoefficientModel m(Family::constant, {a, b}, 0);
        m.validate();
        return m;
    }

    static CoefficientModel power(double p, double b = 0.0) {
        CoefficientModel m(Family::power, {p, b}, 0);
        m.validate();
        return m;
    }

    static CoefficientModel exponential(double c, double b = 0.0, double q = 0.0) {
        CoefficientModel m(Family::exponential, {c, b, q}, 0);
        m.validate();
        return m;
    }

    static CoefficientModel wimp() {
        CoefficientModel m(Family::wimp, {}, 1);
        m.validate();
        return m;
    }

    static CoefficientModel tabulated(std::vector<double> a_table, std::vector<double> b_table,
                                      std::int64_t start_index = 0) {
        if (start_index < 0) throw InvalidParams("tabulated model: start_index must be >= 0");
        if (a_table.size() < 2 || b_table.empty())
            throw InvalidParams("tabulated model needs |a| >= 2 (a_{start-1}, a_start, ...) and |b| >= 1");
        if (!(a_table[0] >= 0.0) || !std::isfinite(a_table[0]))
            throw InvalidParams("tabulated model: left-edge coefficient a_{start-1} must be finite and >= 0");
        for (std::size_t k = 1; k < a_table.size(); ++k)
            if (!(a_table[k] > 0.0) || !std::isfinite(a_table[k]))
                throw NonPositiveCoefficient(start_index - 1 + static_cast<std::int64_t>(k), a_table[k]);
        for (std::size_t k = 0; k < b_table.size(); ++k)
            if (!std::isfinite(b_table[k]))
                throw InvalidParams("tabulated model: b_" + std::to_string(start_index + static_cast<std::int64_t>(k)) +
                                    " is not finite");
        CoefficientModel m(Family::tabulated, {}, start_index);
        m.a_table_ = std::move(a_table);
        m.b_table_ = std::move(b_table);
        return m;
    }

    Family family() const noexcept { return kind_; }
    std::span<const double> params() const noexcept { return params_; }
    std::span<const double> a_table() const noexcept { return a_table_; }
    std::span<const double> b_table() const noexcept { return b_table_; }
    std::int64_t start_index() const noexcept { return start_; }

    /// Last site n for which b_n, a_n and the diagonal are all defined.
    std::int64_t last_site() const noexcept {
        if (kind_ != Family::tabulated) return kUnboundedSite;
        const auto na = static_cast<std::int64_t>(a_table_.size()) - 2;
        const auto nb = static_cast<std::int64_t>(b_table_.size()) - 1;
        return start_ + std::min(na, nb);
    }

    /// a_n without the positivity check; defined for n >= start-1.
    double a_raw(std::int64_t n) const {
        check_a_index(n);
        switch (kind_) {
            case Family::constant: return params_[0];
            case Family::power: return std::pow(static_cast<double>(n + 1), params_[0]);
            case Family::exponential: {
                const double x = static_cast<double>(n);
                return std::exp(params_[0] * x + params_[2] * x * x);
            }
            case Family::wimp: {
                const double x = static_cast<double>(n);
                return std::sqrt(x * (x + 1.0));
            }
            case Family::tabulated: return a_table_[static_cast<std::size_t>(n - start_ + 1)];
        }
        return 0.0;
    }

    /// a_n; throws NonPositiveCoefficient when a_n <= 0 or is not finite.
    double a(std::int64_t n) const {
        const double v = a_raw(n);
        if (!(v > 0.0) || !std::isfinite(v)) throw NonPositiveCoefficient(n, v);
        return v;
    }

    /// log a_n, evaluated without forming a_n for the closed-form families.
    double log_a(std::int64_t n) const {
        check_a_index(n);
        const double x = static_cast<double>(n);
        switch (kind_) {
            case Family::constant: return std::log(params_[0]);
            case Family::power: return params_[0] * std::log(x + 1.0);
            case Family::exponential: return params_[0] * x + params_[2] * x * x;
            case Family::wimp: return 0.5 * (std::log(x) + std::log(x + 1.0));
            case Family::tabulated: return std::log(a_table_[static_cast<std::size_t>(n - start_ + 1)]);
        }
        return 0.0;
    }

    double b(std::int64_t n) const {
        check_site(n);
        switch (kind_) {
            case Family::constant:
            case Family::power:
            case Family::exponential: return params_[1];
            case Family::wimp: return 2.0 * static_cast<double>(n) - a_raw(n) - a_raw(n - 1);
            case Family::tabulated: return b_table_[static_cast<std::size_t>(n - start_)];
        }
        return 0.0;
    }

    /// Diagonal b_n + a_n + a_{n-1} of the difference operator at site n.
    double diagonal(std::int64_t n) const {
        check_site(n);
        if (kind_ == Family::wimp) return 2.0 * static_cast<double>(n);
        return b(n) + a_raw(n) + a_raw(n - 1);
    }

private:
    CoefficientModel(Family kind, std::vector<double> params, std::int64_t start)
        : kind_(kind), params_(std::move(params)), start_(start) {}

    void check_a_index(std::int64_t n) const {
        if (n < start_ - 1) throw IndexOutOfRange(n, "a_n requested left of the lattice");
        if (kind_ == Family::tabulated && n - start_ + 1 >= static_cast<std::int64_t>(a_table_.size()))
            throw IndexOutOfRange(n, "a_n beyond the tabulated range");
        if (n > kUnboundedSite) throw IndexOutOfRange(n, "a_n beyond the supported range");
    }

    void check_site(std::int64_t n) const {
        if (n < start_) throw IndexOutOfRange(n, "site left of the lattice");
        if (n > last_site()) throw IndexOutOfRange(n, "site beyond the model range");
    }

    void validate() const {
        const double edge = a_raw(start_ - 1);
        if (!(edge >= 0.0) || !std::isfinite(edge))
            throw InvalidParams(std::string(to_string(kind_)) + ": left-edge coefficient a_{start-1} = " +
                                std::to_string(edge) + " is not finite and non-negative");
        const double first = a_raw(start_);
        if (!(first > 0.0) || !std::isfinite(first))
            throw InvalidParams(std::string(to_string(kind_)) + ": a_start = " + std::to_string(first) +
                                " is not positive");
        if (!std::isfinite(b(start_)))
            throw InvalidParams(std::string(to_string(kind_)) + ": b_start is not finite");
    }

    Family kind_;
    std::vector<double> params_;
    std::int64_t start_;
    std::vector<double> a_table_;
    std::vector<double> b_table_;
};

/// Builds a named closed-form family from a parameter list.
inline CoefficientModel builtin(std::string_view name, std::span<const double> params) {
    auto arg = [&](std::size_t i, double fallback) { return i < params.size() ? params[i] : fallback; };
    auto arity = [&](std::size_t max) {
        if (params.size() > max)
            throw InvalidParams(std::string(name) + ": expected at most " + std::to_string(max) + " parameters");
        for (double p : params)
            if (!std::isfinite(p)) throw InvalidParams(std::string(name) + ": parameters must be finite");
    };
    if (name == "constant") {
        arity(2);
        return CoefficientModel::constant(arg(0, 1.0), arg(1, 0.0));
    }
    if (name == "power") {
        arity(2);
        if (params.empty()) throw InvalidParams("power: exponent p is required");
        return CoefficientModel::power(params[0], arg(1, 0.0));
    }
    if (name == "exponential") {
        arity(3);
        if (params.empty()) throw InvalidParams("exponential: rate c is required");
        return CoefficientModel::exponential(params[0], arg(1, 0.0), arg(2, 0.0));
    }
    if (name == "wimp") {
        arity(0);
        return CoefficientModel::wimp();
    }
    throw UnknownFamily("unknown coefficient family '" + std::string(name) + "'");
}

inline double eval_a(const CoefficientModel& m, std::int64_t n) { return m.a(n); }
inline double eval_b(const CoefficientModel& m, std::int64_t n) { return m.b(n); }

}  // namespace shnol

#endif  // SHNOL_COEFFS_HPP
