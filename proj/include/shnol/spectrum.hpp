#ifndef SHNOL_SPECTRUM_HPP
#define SHNOL_SPECTRUM_HPP

// Eigenvalues of symmetric tridiagonal finite sections by Sturm-count
// bisection, plus distance and gap queries on the resulting spectra.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <vector>

#include "shnol/csv.hpp"
#include "shnol/errors.hpp"
#include "shnol/jacobi_operator.hpp"
#include "shnol/parallel.hpp"

namespace shnol {

struct SpectrumApproximation {
    std::int64_t N = 0;
    std::vector<double> eigenvalues;  ///< ascending
    double tol = 0.0;
};

/// Number of eigenvalues strictly below x.
///
/// Counts negative pivots of the LDL^T factorization of (T - x I). The pivots
/// are ratios of consecutive leading principal minors, so the recursion
/// carries its own scaling and cannot overflow through the minors themselves.
inline std::int64_t count_below(const FiniteSection& sec, double x) {
    const auto N = sec.diag.size();
    if (N == 0) return 0;
    double emax = 0.0;
    for (double e : sec.offdiag) emax = std::max(emax, std::abs(e));
    const double pivmin = std::numeric_limits<double>::min() * std::max(1.0, emax);

    std::int64_t count = 0;
    double q = sec.diag[0] - x;
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0.0) ++count;
    for (std::size_t k = 1; k < N; ++k) {
        const double e = sec.offdiag[k - 1];
        q = (sec.diag[k] - x) - e * (e / q);
        if (std::abs(q) < pivmin) q = -pivmin;
        if (q < 0.0) ++count;
    }
    return count;
}

/// Gershgorin enclosure [lo, hi] of the section's spectrum.
inline std::pair<double, double> gershgorin(const FiniteSection& sec) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    const auto N = sec.diag.size();
    for (std::size_t k = 0; k < N; ++k) {
        double r = 0.0;
        if (k > 0) r += std::abs(sec.offdiag[k - 1]);
        if (k + 1 < N) r += std::abs(sec.offdiag[k]);
        lo = std::min(lo, sec.diag[k] - r);
        hi = std::max(hi, sec.diag[k] + r);
    }
    return {lo, hi};
}

inline double default_tolerance(const FiniteSection& sec) {
    const auto [lo, hi] = gershgorin(sec);
    return 1e-10 * std::max({1.0, std::abs(lo), std::abs(hi)});
}

namespace detail {

inline constexpr std::size_t kBisectLanes = 8;

/// count_below for kBisectLanes shifts in one sweep. The pivot recursions are
/// independent, so interleaving them hides the division latency; each lane
/// performs exactly the operations of count_below.
inline void count_below_lanes(const FiniteSection& sec, double pivmin,
                              const std::array<double, kBisectLanes>& x,
                              std::array<std::int64_t, kBisectLanes>& count) {
    constexpr std::size_t L = kBisectLanes;
    std::array<double, L> q;
    for (std::size_t j = 0; j < L; ++j) {
        q[j] = sec.diag[0] - x[j];
        if (std::abs(q[j]) < pivmin) q[j] = -pivmin;
        count[j] = q[j] < 0.0;
    }
    for (std::size_t k = 1; k < sec.diag.size(); ++k) {
        const double d = sec.diag[k];
        const double e = sec.offdiag[k - 1];
        for (std::size_t j = 0; j < L; ++j) {
            q[j] = (d - x[j]) - e * (e / q[j]);
            if (std::abs(q[j]) < pivmin) q[j] = -pivmin;
            count[j] += q[j] < 0.0;
        }
    }
}

}  // namespace detail

/// All N eigenvalues, each bracketed by bisection to width <= tol and reported
/// at the bracket midpoint. Every eigenvalue follows the same fixed bisection
/// schedule from the Gershgorin interval, so results do not depend on the
/// number of workers. Eigenvalues are bisected eight at a time in lockstep.
inline SpectrumApproximation eigenvalues(const FiniteSection& sec, double tol = 0.0, std::size_t threads = 1) {
    if (tol <= 0.0) tol = default_tolerance(sec);
    SpectrumApproximation spec;
    spec.N = sec.size();
    spec.tol = tol;
    spec.eigenvalues.assign(sec.diag.size(), 0.0);
    if (sec.diag.empty()) return spec;
    auto [g_lo, g_hi] = gershgorin(sec);
    const double pad = tol + 1e-14 * std::max(std::abs(g_lo), std::abs(g_hi));
    g_lo -= pad;
    g_hi += pad;

    double emax = 0.0;
    for (double e : sec.offdiag) emax = std::max(emax, std::abs(e));
    const double pivmin = std::numeric_limits<double>::min() * std::max(1.0, emax);

    constexpr std::size_t L = detail::kBisectLanes;
    const std::size_t N = sec.diag.size();
    const std::size_t batches = (N + L - 1) / L;
    parallel_for(batches, threads, [&](std::size_t b) {
        std::array<double, L> lo, hi, mid;
        std::array<std::int64_t, L> target, count;
        std::array<bool, L> active;
        for (std::size_t j = 0; j < L; ++j) {
            lo[j] = g_lo;
            hi[j] = g_hi;
            target[j] = static_cast<std::int64_t>(b * L + j) + 1;
            active[j] = b * L + j < N;
        }
        // invariant per lane: count_below(lo) < target <= count_below(hi)
        for (;;) {
            bool any = false;
            for (std::size_t j = 0; j < L; ++j) {
                if (active[j]) {
                    mid[j] = 0.5 * (lo[j] + hi[j]);
                    active[j] = hi[j] - lo[j] > tol && mid[j] > lo[j] && mid[j] < hi[j];
                }
                if (!active[j]) mid[j] = g_lo;
                any = any || active[j];
            }
            if (!any) break;
            detail::count_below_lanes(sec, pivmin, mid, count);
            for (std::size_t j = 0; j < L; ++j) {
                if (!active[j]) continue;
                if (count[j] >= target[j])
                    hi[j] = mid[j];
                else
                    lo[j] = mid[j];
            }
        }
        for (std::size_t j = 0; j < L && b * L + j < N; ++j) spec.eigenvalues[b * L + j] = 0.5 * (lo[j] + hi[j]);
    });
    return spec;
}

/// min_k |lambda - lambda_k|.
inline double spectral_distance(const SpectrumApproximation& spec, double lambda) {
    const auto& ev = spec.eigenvalues;
    if (ev.empty()) throw EmptySpectrum();
    const auto it = std::lower_bound(ev.begin(), ev.end(), lambda);
    double best = std::numeric_limits<double>::infinity();
    if (it != ev.end()) best = *it - lambda;
    if (it != ev.begin()) best = std::min(best, lambda - *std::prev(it));
    return best;
}

/// Largest gap between consecutive points of {lo} U (spectrum within [lo, hi]) U {hi}.
inline double spectrum_gaps(const SpectrumApproximation& spec, double lo, double hi) {
    if (!(lo < hi)) throw std::invalid_argument("spectrum_gaps: need lo < hi");
    double prev = lo;
    double gap = 0.0;
    for (double x : spec.eigenvalues) {
        if (x < lo) continue;
        if (x > hi) break;
        gap = std::max(gap, x - prev);
        prev = x;
    }
    return std::max(gap, hi - prev);
}

/// CSV columns k, lambda_k (k starts at 1).
inline void write_csv(std::ostream& os, const SpectrumApproximation& spec) {
    csv::row(os, "k", "lambda_k");
    for (std::size_t k = 0; k < spec.eigenvalues.size(); ++k)
        csv::row(os, static_cast<std::int64_t>(k + 1), spec.eigenvalues[k]);
}

}  // namespace shnol

#endif  // SHNOL_SPECTRUM_HPP
