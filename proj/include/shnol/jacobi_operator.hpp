#ifndef SHNOL_JACOBI_OPERATOR_HPP
#define SHNOL_JACOBI_OPERATOR_HPP

// The difference operator B on l^2 of the lattice n >= start:
// exact action on finitely supported vectors, Dirichlet finite sections, the
// (-1)^n conjugation and the Hinton-Lewis weighted change of variables.

#include <cmath>
#include <cstdint>
#include <ostream>
#include <vector>

#include "shnol/coeffs.hpp"
#include "shnol/csv.hpp"
#include "shnol/errors.hpp"
#include "shnol/recurrence.hpp"

namespace shnol {

/// Finitely supported vector: values[i] sits at site first + i, zero elsewhere.
struct SparseVector {
    std::int64_t first = 0;
    std::vector<double> values;

    std::int64_t last() const noexcept { return first + static_cast<std::int64_t>(values.size()) - 1; }
    bool empty() const noexcept { return values.empty(); }
    double at(std::int64_t n) const noexcept {
        if (n < first || n > last()) return 0.0;
        return values[static_cast<std::size_t>(n - first)];
    }
};

inline double norm(const SparseVector& v) {
    double scale = 0.0;
    for (double x : v.values) scale = std::max(scale, std::abs(x));
    if (scale == 0.0) return 0.0;
    double ss = 0.0;
    for (double x : v.values) ss += (x / scale) * (x / scale);
    return scale * std::sqrt(ss);
}

/// (B - lambda) w with no truncation: the result is supported on
/// [max(first-1, start), last+1]. The site start-1 is not part of the
/// lattice, so nothing is emitted there.
inline SparseVector apply(const CoefficientModel& model, const SparseVector& w, double lambda,
                          Form form = Form::eq1) {
    const std::int64_t s = model.start_index();
    if (w.empty()) return {};
    if (w.first < s) throw SupportOutOfRange("apply: support starts left of the lattice");
    if (w.last() + 1 > model.last_site()) throw SupportOutOfRange("apply: support needs one site of right margin");

    const double sgn = off_diagonal_sign(form);
    SparseVector out;
    out.first = std::max(w.first - 1, s);
    const std::int64_t out_last = w.last() + 1;
    out.values.resize(static_cast<std::size_t>(out_last - out.first + 1));
    for (std::int64_t n = out.first; n <= out_last; ++n) {
        const double left = n > s ? model.a(n - 1) * w.at(n - 1) : 0.0;
        const double right = model.a(n) * w.at(n + 1);
        out.values[static_cast<std::size_t>(n - out.first)] =
            sgn * (right + left) + (model.diagonal(n) - lambda) * w.at(n);
    }
    return out;
}

/// Symmetric tridiagonal N x N truncation on sites [start, start + N) with
/// Dirichlet conditions y_{start-1} = y_{start+N} = 0.
struct FiniteSection {
    std::int64_t start = 0;
    Form form = Form::eq2;
    std::vector<double> diag;
    std::vector<double> offdiag;

    std::int64_t size() const noexcept { return static_cast<std::int64_t>(diag.size()); }
};

inline FiniteSection finite_section(const CoefficientModel& model, std::int64_t N, Form form = Form::eq2) {
    if (N < 1) throw std::invalid_argument("finite_section: N must be >= 1");
    const std::int64_t s = model.start_index();
    if (s + N - 1 > model.last_site())
        throw IndexOutOfRange(s + N - 1, "finite_section: model does not cover the requested range");
    FiniteSection sec;
    sec.start = s;
    sec.form = form;
    sec.diag.resize(static_cast<std::size_t>(N));
    sec.offdiag.resize(static_cast<std::size_t>(N - 1));
    const double sgn = off_diagonal_sign(form);
    for (std::int64_t k = 0; k < N; ++k) {
        sec.diag[static_cast<std::size_t>(k)] = model.diagonal(s + k);
        if (k + 1 < N) sec.offdiag[static_cast<std::size_t>(k)] = sgn * model.a(s + k);
    }
    return sec;
}

/// Conjugation by diag((-1)^n): flips the off-diagonal signs, same spectrum.
inline FiniteSection gauge_conjugate(FiniteSection sec) {
    for (double& e : sec.offdiag) e = -e;
    sec.form = toggled(sec.form);
    return sec;
}

/// CSV columns n, diag, offdiag (offdiag empty on the last row).
inline void write_csv(std::ostream& os, const FiniteSection& sec) {
    csv::row(os, "n", "diag", "offdiag");
    for (std::int64_t k = 0; k < sec.size(); ++k) {
        const auto i = static_cast<std::size_t>(k);
        if (k + 1 < sec.size())
            csv::row(os, sec.start + k, sec.diag[i], sec.offdiag[i]);
        else
            csv::row(os, sec.start + k, sec.diag[i], "");
    }
}

/// A real sequence indexed from `first`.
struct IndexedSequence {
    std::int64_t first = 0;
    std::vector<double> values;

    std::int64_t last() const noexcept { return first + static_cast<std::int64_t>(values.size()) - 1; }
    double operator[](std::int64_t n) const {
        if (n < first || n > last()) throw IndexOutOfRange(n, "sequence index outside its range");
        return values[static_cast<std::size_t>(n - first)];
    }
};

/// Result of the Hinton-Lewis substitution: the coupling a~_n, the full
/// diagonal b~_n of the transformed equation
///     -a~_n z_{n+1} + b~_n z_n - a~_{n-1} z_{n-1} = lambda z_n,
/// and an equivalent tabulated model whose diagonal reproduces b~_n.
struct HintonLewis {
    IndexedSequence a_tilde;
    IndexedSequence b_tilde;
    CoefficientModel model;
};

/// Turns -p_n y_{n+1} + q_n y_n - p_{n-1} y_{n-1} = lambda c_n y_n into standard
/// form through z_n = sqrt(c_n) y_n, a~_n = c_n^{-1/2} p_n c_{n+1}^{-1/2},
/// b~_n = q_n / c_n, on the N sites starting at p.first. Needs p_n and c_n on
/// one extra site to the right. The left-edge coupling is taken as zero.
inline HintonLewis hinton_lewis(const IndexedSequence& p, const IndexedSequence& q, const IndexedSequence& c,
                                std::int64_t N) {
    if (N < 1) throw std::invalid_argument("hinton_lewis: N must be >= 1");
    const std::int64_t s = p.first;
    for (std::int64_t n = s; n <= s + N; ++n)
        if (!(c[n] > 0.0) || !std::isfinite(c[n])) throw NonPositiveWeight(n);

    HintonLewis out{{s, {}}, {s, {}}, CoefficientModel::constant()};
    std::vector<double> a_table{0.0};
    std::vector<double> b_table;
    for (std::int64_t n = s; n < s + N; ++n) {
        if (p[n] == 0.0) throw NonPositiveCoefficient(n, p[n]);
        const double an = p[n] / std::sqrt(c[n] * c[n + 1]);
        out.a_tilde.values.push_back(an);
        out.b_tilde.values.push_back(q[n] / c[n]);
        a_table.push_back(an);
    }
    for (std::int64_t k = 0; k < N; ++k) {
        const auto i = static_cast<std::size_t>(k);
        b_table.push_back(out.b_tilde.values[i] - a_table[i + 1] - a_table[i]);
    }
    out.model = CoefficientModel::tabulated(std::move(a_table), std::move(b_table), s);
    return out;
}

}  // namespace shnol

#endif  // SHNOL_JACOBI_OPERATOR_HPP
