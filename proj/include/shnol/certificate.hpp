#ifndef SHNOL_CERTIFICATE_HPP
#define SHNOL_CERTIFICATE_HPP

// Weyl certificates: a solution y of (B - lambda) y = 0 is cut off by a window
// v, and the exact residual of w = v y bounds the distance from lambda to the
// spectrum of the self-adjoint operator:
//
//     d(lambda, sigma(B)) <= ||(B - lambda) w|| / ||w||.
//
// For a solution the residual equals the commutator [B, v] y, which lives
// where v is not locally constant.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "shnol/csv.hpp"
#include "shnol/errors.hpp"
#include "shnol/jacobi_operator.hpp"
#include "shnol/parallel.hpp"
#include "shnol/recurrence.hpp"

namespace shnol {

enum class WindowKind { sharp, linear_taper, cosine_taper };

inline std::string_view to_string(WindowKind k) {
    switch (k) {
        case WindowKind::sharp: return "sharp";
        case WindowKind::linear_taper: return "linear_taper";
        case WindowKind::cosine_taper: return "cosine_taper";
    }
    return "?";
}

/// v_n = 1 on [n0, r - W], 0 outside [n0, r], decreasing on the taper (r - W, r].
struct CutoffWindow {
    WindowKind kind = WindowKind::sharp;
    std::int64_t n0 = 0;
    std::int64_t r = 0;
    std::int64_t W = 0;

    double operator()(std::int64_t n) const noexcept {
        if (n < n0 || n > r) return 0.0;
        if (n <= r - W) return 1.0;
        const double t = static_cast<double>(n - (r - W)) / static_cast<double>(W);
        if (kind == WindowKind::linear_taper) return 1.0 - t;
        return 0.5 * (1.0 + std::cos(std::numbers::pi * t));
    }
};

inline CutoffWindow make_window(WindowKind kind, std::int64_t n0, std::int64_t r, std::int64_t W) {
    if (n0 < 0) throw BadGeometry("window: n0 must be >= 0");
    if (W < 0) throw BadGeometry("window: taper width must be >= 0");
    if ((W == 0) != (kind == WindowKind::sharp)) throw BadGeometry("window: W = 0 exactly for sharp windows");
    if (kind == WindowKind::sharp && !(r - 1 > n0)) throw BadGeometry("window: sharp cutoff needs r - 1 > n0");
    if (!(r - W > n0)) throw BadGeometry("window: need r - W > n0");
    return {kind, n0, r, W};
}

struct WeylCertificate {
    double lambda = 0.0;
    CutoffWindow window;
    double log_w_norm = 0.0;         ///< log ||v y||
    double log_residual_norm = 0.0;  ///< log ||(B - lambda)(v y)||, after thresholding
    double bound = 0.0;              ///< residual_norm / w_norm
    double threshold = 1e-9;
    double dropped_ratio = 0.0;      ///< norm of the zeroed entries / w_norm
    SparseVector residual;           ///< residual in units where max |w_n| ~ 1

    double w_norm() const { return std::exp(log_w_norm); }
    double residual_norm() const { return std::exp(log_residual_norm); }
};

/// Builds w = v y from a solution, applies (B - lambda) exactly and zeroes the
/// entries that are pure cancellation noise: where v is locally constant the
/// residual is v_n times the recurrence residual of y, and an entry is dropped
/// when it is at most `threshold` times the sum of the magnitudes of its terms.
inline WeylCertificate weyl_certificate(const CoefficientModel& model, double lambda, const RecurrenceSolution& sol,
                                        const CutoffWindow& window, double threshold = 1e-9) {
    if (window.n0 < sol.first_index())
        throw MarginTooSmall("certificate: window starts left of the solution");
    if (window.r + 4 > sol.last_index())
        throw MarginTooSmall("certificate: solution must extend 4 sites past the window");

    std::int64_t ref = std::numeric_limits<std::int64_t>::min();
    for (std::int64_t n = window.n0; n <= window.r; ++n)
        if (window(n) != 0.0 && sol.mantissa(n) != 0.0) ref = std::max(ref, sol.exponent(n));
    if (ref == std::numeric_limits<std::int64_t>::min()) throw ZeroVector();

    SparseVector w;
    w.first = window.n0;
    w.values.resize(static_cast<std::size_t>(window.r - window.n0 + 1));
    for (std::int64_t n = window.n0; n <= window.r; ++n)
        w.values[static_cast<std::size_t>(n - window.n0)] = window(n) * sol.scaled(n, ref);
    const double wn = norm(w);
    if (wn == 0.0) throw ZeroVector();

    WeylCertificate cert;
    cert.lambda = lambda;
    cert.window = window;
    cert.threshold = threshold;
    cert.residual = apply(model, w, lambda, sol.form);

    const std::int64_t s = model.start_index();
    SparseVector dropped;
    for (std::int64_t n = cert.residual.first; n <= cert.residual.last(); ++n) {
        const double v_here = window(n);
        if (window(n - 1) != v_here || window(n + 1) != v_here) continue;
        double& entry = cert.residual.values[static_cast<std::size_t>(n - cert.residual.first)];
        const double left = n > s ? std::abs(model.a(n - 1) * w.at(n - 1)) : 0.0;
        const double scale = left + std::abs(model.a(n) * w.at(n + 1)) +
                             std::abs(model.diagonal(n) * w.at(n)) + std::abs(lambda * w.at(n));
        if (std::abs(entry) <= threshold * scale) {
            dropped.values.push_back(entry);
            entry = 0.0;
        }
    }

    const double rn = norm(cert.residual);
    const double ln2 = std::numbers::ln2;
    cert.log_w_norm = std::log(wn) + static_cast<double>(ref) * ln2;
    cert.log_residual_norm = (rn > 0.0 ? std::log(rn) : -std::numeric_limits<double>::infinity()) +
                             static_cast<double>(ref) * ln2;
    cert.bound = rn / wn;
    cert.dropped_ratio = norm(dropped) / wn;
    return cert;
}

/// Candidate windows for one right edge r: sharp uses W = 0, tapers use
/// W in {r/4, r/2}; candidates that violate the geometry are skipped.
inline std::vector<CutoffWindow> candidate_windows(std::int64_t n0, std::int64_t r, WindowKind kind) {
    std::vector<CutoffWindow> out;
    if (kind == WindowKind::sharp) {
        if (r - 1 > n0) out.push_back({kind, n0, r, 0});
        return out;
    }
    for (std::int64_t W : {r / 4, r / 2})
        if (W > 0 && r - W > n0) out.push_back({kind, n0, r, W});
    return out;
}

/// Minimal-bound certificate over r_grid x kinds x W. Ties go to the smallest
/// r, then sharp < linear < cosine, then the narrower taper.
inline WeylCertificate optimize_certificate(const CoefficientModel& model, double lambda,
                                            const RecurrenceSolution& sol, std::vector<std::int64_t> r_grid,
                                            std::vector<WindowKind> kinds, std::int64_t n0 = -1,
                                            double threshold = 1e-9, std::size_t threads = 1) {
    if (r_grid.empty() || kinds.empty()) throw std::invalid_argument("optimize_certificate: empty search grid");
    if (n0 < 0) n0 = sol.first_index();
    std::sort(r_grid.begin(), r_grid.end());
    r_grid.erase(std::unique(r_grid.begin(), r_grid.end()), r_grid.end());
    std::sort(kinds.begin(), kinds.end());
    kinds.erase(std::unique(kinds.begin(), kinds.end()), kinds.end());

    std::vector<CutoffWindow> windows;
    for (std::int64_t r : r_grid)
        for (WindowKind k : kinds)
            for (const auto& w : candidate_windows(n0, r, k)) windows.push_back(w);
    if (windows.empty()) throw BadGeometry("optimize_certificate: no admissible window in the grid");

    std::vector<WeylCertificate> certs(windows.size());
    parallel_for(windows.size(), threads, [&](std::size_t i) {
        certs[i] = weyl_certificate(model, lambda, sol, windows[i], threshold);
        certs[i].residual = {};
    });
    std::size_t best = 0;
    for (std::size_t i = 1; i < certs.size(); ++i)
        if (certs[i].bound < certs[best].bound) best = i;
    return weyl_certificate(model, lambda, sol, windows[best], threshold);
}

inline void write_certificate_csv_header(std::ostream& os) {
    csv::row(os, "lambda", "kind", "n0", "r", "W", "w_norm", "residual_norm", "bound", "threshold");
}

inline void write_certificate_csv_row(std::ostream& os, const WeylCertificate& c) {
    csv::row(os, c.lambda, to_string(c.window.kind), c.window.n0, c.window.r, c.window.W, c.w_norm(),
             c.residual_norm(), c.bound, c.threshold);
}

}  // namespace shnol

#endif  // SHNOL_CERTIFICATE_HPP
