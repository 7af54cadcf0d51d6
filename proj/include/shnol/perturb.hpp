#ifndef SHNOL_PERTURB_HPP
#define SHNOL_PERTURB_HPP

// Perturbed equation
//     -Delta[(a_{n-1} + eta_{n-1}) Delta y_{n-1}] + (b_n + psi_n) y_n = lambda y_n,
// its hypothesis checks (b_n >= alpha eventually, eta/a -> 0, psi/b -> 0) and a
// finite-section comparison of the spectra of the two operators in a window.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "shnol/coeffs.hpp"
#include "shnol/csv.hpp"
#include "shnol/errors.hpp"
#include "shnol/jacobi_operator.hpp"
#include "shnol/parallel.hpp"
#include "shnol/spectrum.hpp"

namespace shnol {

/// Closed-form or tabulated perturbation sequence.
///   zero         0
///   constant     c
///   inverse      c / (n + 1)
///   linear       c n
///   tabulated    table[n] (zero outside the table)
struct PerturbationSequence {
    enum class Kind { zero, constant, inverse, linear, tabulated };
    Kind kind = Kind::zero;
    double c = 0.0;
    IndexedSequence table;

    double operator()(std::int64_t n) const {
        switch (kind) {
            case Kind::zero: return 0.0;
            case Kind::constant: return c;
            case Kind::inverse: return c / static_cast<double>(n + 1);
            case Kind::linear: return c * static_cast<double>(n);
            case Kind::tabulated:
                if (n < table.first || n > table.last()) return 0.0;
                return table[n];
        }
        return 0.0;
    }

    static PerturbationSequence zero() { return {}; }
    static PerturbationSequence constant(double c) { return {Kind::constant, c, {}}; }
    static PerturbationSequence inverse(double c) { return {Kind::inverse, c, {}}; }
    static PerturbationSequence linear(double c) { return {Kind::linear, c, {}}; }
    static PerturbationSequence tabulated(IndexedSequence t) { return {Kind::tabulated, 0.0, std::move(t)}; }
};

/// The coupling perturbation acts on a_n for n >= start; the left-edge value
/// a_{start-1}, which only enters the first diagonal entry, is left untouched.
struct PerturbationPair {
    CoefficientModel base;
    PerturbationSequence eta;
    PerturbationSequence psi;
    double alpha = 0.0;

    double eta_at(std::int64_t n) const { return n < base.start_index() ? 0.0 : eta(n); }
};

/// Section of the perturbed operator: the base section plus the increments.
/// A zero perturbation reproduces the base section bit for bit.
inline FiniteSection perturbed_section(const PerturbationPair& pair, std::int64_t N, Form form = Form::eq2) {
    FiniteSection sec = finite_section(pair.base, N, form);
    const double sgn = off_diagonal_sign(form);
    for (std::int64_t k = 0; k < N; ++k) {
        const std::int64_t n = sec.start + k;
        const auto i = static_cast<std::size_t>(k);
        sec.diag[i] += pair.psi(n) + pair.eta_at(n) + pair.eta_at(n - 1);
        if (k + 1 < N) sec.offdiag[i] = sgn * (pair.base.a(n) + pair.eta_at(n));
    }
    return sec;
}

struct Theorem5Verdict {
    std::optional<std::int64_t> alpha_from;  ///< b_n >= alpha for all tested n >= alpha_from
    std::vector<double> eta_block_max;       ///< max |eta_n / a_n| on n + 1 in [2^j, 2^{j+1})
    std::vector<double> psi_block_max;       ///< max |psi_n / b_n| on the same blocks
    bool eta_decreasing = false;
    bool psi_decreasing = false;
    double min_a_plus_eta = 0.0;

    bool satisfied() const { return alpha_from.has_value() && eta_decreasing && psi_decreasing; }
};

namespace detail {

/// Block maxima are nonincreasing and the last block is at most half the first
/// (or everything vanishes).
inline bool decays(const std::vector<double>& blocks) {
    if (blocks.empty()) return false;
    for (double b : blocks)
        if (!std::isfinite(b)) return false;
    for (std::size_t j = 1; j < blocks.size(); ++j)
        if (blocks[j] > blocks[j - 1] * (1.0 + 1e-12)) return false;
    return blocks.back() == 0.0 || blocks.back() <= 0.5 * blocks.front();
}

}  // namespace detail

inline Theorem5Verdict check_theorem5_hypotheses(const PerturbationPair& pair, std::int64_t N) {
    if (N < 16) throw std::invalid_argument("check_theorem5_hypotheses: N must be >= 16");
    const std::int64_t s = pair.base.start_index();
    const std::int64_t last = s + N - 1;
    Theorem5Verdict v;
    v.min_a_plus_eta = std::numeric_limits<double>::infinity();
    for (std::int64_t n = s; n <= last; ++n) {
        const double ap = pair.base.a(n) + pair.eta_at(n);
        if (!(ap > 0.0)) throw PositivityViolated(n);
        v.min_a_plus_eta = std::min(v.min_a_plus_eta, ap);
    }

    for (std::int64_t n = last; n >= s && pair.base.b(n) >= pair.alpha; --n) v.alpha_from = n;
    if (!(pair.alpha > 0.0)) v.alpha_from.reset();

    auto ratio = [](double num, double den) {
        if (num == 0.0) return 0.0;
        if (den == 0.0) return std::numeric_limits<double>::infinity();
        return std::abs(num / den);
    };
    for (std::int64_t lo = 1; lo - 1 <= last; lo *= 2) {
        const std::int64_t from = std::max(lo - 1, s);
        const std::int64_t to = std::min(2 * lo - 2, last);
        if (from > to) continue;
        double em = 0.0, pm = 0.0;
        for (std::int64_t n = from; n <= to; ++n) {
            em = std::max(em, ratio(pair.eta_at(n), pair.base.a(n)));
            pm = std::max(pm, ratio(pair.psi(n), pair.base.b(n)));
        }
        v.eta_block_max.push_back(em);
        v.psi_block_max.push_back(pm);
    }
    v.eta_decreasing = detail::decays(v.eta_block_max);
    v.psi_decreasing = detail::decays(v.psi_block_max);
    return v;
}

namespace detail {

inline std::vector<double> clip(const std::vector<double>& ev, double lo, double hi) {
    std::vector<double> out;
    for (double x : ev)
        if (x >= lo && x <= hi) out.push_back(x);
    return out;
}

inline double one_sided(const std::vector<double>& from, const std::vector<double>& to) {
    double worst = 0.0;
    for (double x : from) {
        const auto it = std::lower_bound(to.begin(), to.end(), x);
        double d = std::numeric_limits<double>::infinity();
        if (it != to.end()) d = *it - x;
        if (it != to.begin()) d = std::min(d, x - *std::prev(it));
        worst = std::max(worst, d);
    }
    return worst;
}

}  // namespace detail

/// Hausdorff distance of two sorted point sets clipped to [lo, hi]; hi - lo
/// when exactly one of them is empty.
inline double clipped_hausdorff(const std::vector<double>& x, const std::vector<double>& y, double lo, double hi) {
    const auto a = detail::clip(x, lo, hi);
    const auto b = detail::clip(y, lo, hi);
    if (a.empty() && b.empty()) return 0.0;
    if (a.empty() || b.empty()) return hi - lo;
    return std::max(detail::one_sided(a, b), detail::one_sided(b, a));
}

/// max over t in [lo, hi] of |#{x_k in [lo, t]} - #{y_k in [lo, t]}|.
inline std::int64_t counting_discrepancy(const std::vector<double>& x, const std::vector<double>& y, double lo,
                                         double hi) {
    const auto a = detail::clip(x, lo, hi);
    const auto b = detail::clip(y, lo, hi);
    std::size_t i = 0, j = 0;
    std::int64_t worst = 0;
    while (i < a.size() || j < b.size()) {
        const double t = j >= b.size() || (i < a.size() && a[i] <= b[j]) ? a[i] : b[j];
        while (i < a.size() && a[i] <= t) ++i;
        while (j < b.size() && b[j] <= t) ++j;
        worst = std::max(worst, std::abs(static_cast<std::int64_t>(i) - static_cast<std::int64_t>(j)));
    }
    return worst;
}

struct ConvergenceRow {
    std::int64_t N = 0;
    double hausdorff = 0.0;
    std::int64_t counting_discrepancy = 0;
};

inline std::vector<ConvergenceRow> essential_spectrum_compare(const PerturbationPair& pair,
                                                              const std::vector<std::int64_t>& N_list, double lo,
                                                              double hi, double tol = 0.0, std::size_t threads = 1) {
    if (!(lo < hi)) throw std::invalid_argument("essential_spectrum_compare: need lo < hi");
    if (N_list.empty()) throw std::invalid_argument("essential_spectrum_compare: empty N_list");
    if (!std::is_sorted(N_list.begin(), N_list.end())) throw std::invalid_argument("N_list must be increasing");
    std::vector<ConvergenceRow> rows(N_list.size());
    for (std::size_t i = 0; i < N_list.size(); ++i) {
        const auto N = N_list[i];
        const auto base = eigenvalues(finite_section(pair.base, N), tol, threads);
        const auto pert = eigenvalues(perturbed_section(pair, N), tol, threads);
        rows[i] = {N, clipped_hausdorff(base.eigenvalues, pert.eigenvalues, lo, hi),
                   counting_discrepancy(base.eigenvalues, pert.eigenvalues, lo, hi)};
    }
    return rows;
}

/// Max absolute row sum of (perturbed section - base section), an upper bound
/// on the spectral norm of the difference and hence on every eigenvalue shift.
inline double perturbation_row_sum_bound(const PerturbationPair& pair, std::int64_t N) {
    const auto base = finite_section(pair.base, N);
    const auto pert = perturbed_section(pair, N);
    double worst = 0.0;
    for (std::size_t k = 0; k < base.diag.size(); ++k) {
        double row = std::abs(pert.diag[k] - base.diag[k]);
        if (k > 0) row += std::abs(pert.offdiag[k - 1] - base.offdiag[k - 1]);
        if (k + 1 < base.diag.size()) row += std::abs(pert.offdiag[k] - base.offdiag[k]);
        worst = std::max(worst, row);
    }
    return worst;
}

inline void write_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows) {
    csv::row(os, "N", "hausdorff", "counting_discrepancy");
    for (const auto& r : rows) csv::row(os, r.N, r.hausdorff, r.counting_discrepancy);
}

}  // namespace shnol

#endif  // SHNOL_PERTURB_HPP
