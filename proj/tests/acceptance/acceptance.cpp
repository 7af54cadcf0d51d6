// Acceptance suite: one PASS/FAIL line per criterion.
//   shnol_acceptance                 run all criteria
//   shnol_acceptance --criterion k   run criterion k only

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "shnol/shnol.hpp"

using namespace shnol;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::size_t workers() { return std::max(1u, std::thread::hardware_concurrency()); }

// 1. Free Jacobi N = 1000 against 2 - 2cos(k pi / 1001), single worker.
Outcome criterion1() {
    const std::int64_t N = 1000;
    const auto t0 = std::chrono::steady_clock::now();
    const auto spec = eigenvalues(finite_section(CoefficientModel::constant(), N), 1e-11, 1);
    const double elapsed = seconds_since(t0);
    double err = 0.0;
    for (std::int64_t k = 1; k <= N; ++k)
        err = std::max(err, std::abs(spec.eigenvalues[static_cast<std::size_t>(k - 1)] -
                                     (2.0 - 2.0 * std::cos(static_cast<double>(k) * std::numbers::pi / (N + 1)))));
    return {err <= 1e-10 && elapsed <= 5.0, "max abs error " + fmt("%.3g", err) + ", " + fmt("%.2f", elapsed) + " s"};
}

// 2. 10^4 random trials of the a-priori inequality under its hypothesis.
Outcome criterion2() {
    std::mt19937_64 rng(20240501);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    int held = 0;
    const int trials = 10000;
    for (int t = 0; t < trials; ++t) {
        const std::int64_t len = 8 + static_cast<std::int64_t>(rng() % 200);
        const double roughness = std::uniform_real_distribution<double>(0.0, 2.0)(rng);
        IndexedSequence a{-1, {}}, y{-1, {}};
        double la = 3.0 * gauss(rng);
        for (std::int64_t k = -1; k <= len; ++k) {
            a.values.push_back(std::exp(la));
            la += roughness * unit(rng);
            y.values.push_back(t % 3 == 0 ? std::exp(0.1 * gauss(rng)) * (k % 2 ? 1 : -1) : gauss(rng));
        }
        std::int64_t idx[4];
        for (auto& i : idx) i = 1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(len - 1));
        std::sort(idx, idx + 4);
        const double C1 = measure_C1(a, idx[0] - 1, idx[3] - 1);
        try {
            if (theorem4_check(a, y, C1, idx[0], idx[1], idx[2], idx[3]).holds) ++held;
        } catch (const std::exception&) {
        }
    }
    return {held == trials, std::to_string(held) + "/" + std::to_string(trials) + " trials hold"};
}

// 3. 10^3 random certificates against finite-section spectra.
Outcome criterion3() {
    std::mt19937_64 rng(7331);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int sound = 0, errors = 0;
    double worst = -INFINITY;
    const int trials = 1000;
    for (int t = 0; t < trials; ++t) {
        const std::int64_t N = 40 + static_cast<std::int64_t>(rng() % 400);
        CoefficientModel model = CoefficientModel::constant();
        switch (t % 4) {
            case 0: model = CoefficientModel::constant(0.2 + 3.0 * unit(rng), 4.0 * unit(rng) - 2.0); break;
            case 1: model = CoefficientModel::power(1.5 * unit(rng), unit(rng)); break;
            case 2: model = CoefficientModel::wimp(); break;
            default: {
                std::vector<double> a{2.0 * unit(rng)}, b;
                for (std::int64_t k = 0; k <= N + 8; ++k) a.push_back(std::exp(3.0 * unit(rng) - 1.5));
                for (std::int64_t k = 0; k <= N + 8; ++k) b.push_back(6.0 * unit(rng) - 3.0);
                model = CoefficientModel::tabulated(a, b);
            }
        }
        const Form form = t % 2 ? Form::eq1 : Form::eq2;
        const auto sec = finite_section(model, N, form);
        const auto spec = eigenvalues(sec, 1e-12);
        const auto [g_lo, g_hi] = gershgorin(sec);
        const double lam = g_lo - 1.0 + (g_hi - g_lo + 2.0) * unit(rng);
        const std::int64_t s = model.start_index();
        const auto kind = static_cast<WindowKind>(rng() % 3);
        const std::int64_t n0 = s + static_cast<std::int64_t>(rng() % 5);
        const std::int64_t r = n0 + 8 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(N - 12));
        const std::int64_t W = kind == WindowKind::sharp ? 0 : 1 + static_cast<std::int64_t>(rng() % (r - n0 - 1));
        try {
            const auto sol = solve(model, lam, form, r + 4 - s);
            const auto cert = weyl_certificate(model, lam, sol, make_window(kind, n0, r, W));
            const double d = spectral_distance(spec, lam);
            worst = std::max(worst, d - cert.bound);
            if (d <= cert.bound + 1e-8) ++sound;
        } catch (const std::exception&) {
            ++errors;
        }
    }
    return {sound == trials, std::to_string(sound) + "/" + std::to_string(trials) + " sound, " +
                                 std::to_string(errors) + " errors, max(d - bound) " + fmt("%.3g", worst)};
}

// 4. Free operator below the band: d / (e^{2 beta} - 1)^{1/2} stays bounded.
Outcome criterion4() {
    const auto model = CoefficientModel::constant();
    const auto spec = eigenvalues(finite_section(model, 2000), 1e-12);
    double closed_max = 0.0, measured_max = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double lam = -1.0 + 0.01 * i;
        const double beta = std::acosh(1.0 - lam / 2.0);
        const double closed = -lam / shnol_bound_curve({beta})[0];
        closed_max = std::max(closed_max, closed);
        const auto sol = solve(model, lam, Form::eq1, 4000);
        const auto g = estimate_growth(sol, 2000, 4000);
        const double measured = spectral_distance(spec, lam) / shnol_bound_curve({g.beta_hat})[0];
        measured_max = std::max(measured_max, measured);
    }
    return {closed_max <= 0.6 && measured_max <= 0.6,
            "max ratio " + fmt("%.4f", closed_max) + " closed form, " + fmt("%.4f", measured_max) + " measured"};
}

ExperimentConfig wimp_config() { return parse_config_text(R"({"command": "wimp"})"); }

// 5. Wimp example: eligibility, certificates <= 0.05 with r <= 1e5, section gaps <= 0.05 in [-3, 3].
Outcome criterion5() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto w = run_wimp(wimp_config(), workers());
    const double elapsed = seconds_since(t0);
    std::ostringstream failing;
    int ok = 0;
    for (const auto& row : w.certificates) {
        const bool good = row.error.empty() && row.cert.bound <= 0.05 && row.cert.window.r <= 100000;
        if (good)
            ++ok;
        else
            failing << ' ' << row.cert.lambda;
    }
    const bool pass =
        w.report.eligible() && ok == static_cast<int>(w.certificates.size()) && w.max_gap <= 0.05 && elapsed <= 600;
    std::ostringstream d;
    d << "eligible=" << (w.report.eligible() ? "yes" : "no") << ", certificates " << ok << "/" << w.certificates.size()
      << " <= 0.05 (max bound " << fmt("%.4g", w.max_bound) << "; failing lambda:" << failing.str()
      << "), max gap in [-3,3] " << fmt("%.4g", w.max_gap) << ", " << fmt("%.1f", elapsed) << " s";
    return {pass, d.str()};
}

// 6. Scan of the free operator at N = 4000.
Outcome criterion6() {
    auto cfg = parse_config_text(
        R"({"command": "scan", "lambda_grid": {"start": -1.0, "stop": 3.95, "step": 0.05}, "N": 4000})");
    const auto res = run_scan(cfg, workers());
    int inside = 0, inside_members = 0, inside_bad = 0, below = 0, below_bad = 0;
    double worst_dist = 0.0, worst_beta = 0.0;
    for (const auto& r : res.rows) {
        if (r.lambda > 0.0 && r.lambda < 4.0) {
            ++inside;
            if (r.in_E) {
                ++inside_members;
                worst_dist = std::max(worst_dist, r.dist);
                if (!(r.dist <= 5e-3)) ++inside_bad;
            }
        } else if (r.lambda < -0.05) {
            ++below;
            const double beta = std::acosh(1.0 - r.lambda / 2.0);
            const double rel = std::abs(r.beta_hat - beta) / beta;
            worst_beta = std::max(worst_beta, rel);
            if (r.in_E || !(rel <= 0.02)) ++below_bad;
        }
    }
    std::ostringstream d;
    d << inside_members << "/" << inside << " grid points in (0,4) classified into E^, max dist "
      << fmt("%.3g", worst_dist) << "; " << below - below_bad << "/" << below
      << " points below -0.05 excluded, worst beta error " << fmt("%.3g", 100 * worst_beta) << "%";
    return {inside_bad == 0 && below_bad == 0 && res.failures == 0, d.str()};
}

// 7. eta = psi = 1/(n+1) on a = b = 1: window-clipped Hausdorff distance trend.
Outcome criterion7() {
    const std::vector<std::int64_t> Ns{500, 1000, 2000, 4000};
    const PerturbationPair pert{CoefficientModel::constant(1.0, 1.0), PerturbationSequence::inverse(1.0),
                                PerturbationSequence::inverse(1.0), 0.5};
    const PerturbationPair zero{CoefficientModel::constant(1.0, 1.0), {}, {}, 0.5};
    const auto rows = essential_spectrum_compare(pert, Ns, 0.5, 5.5, 0.0, workers());
    const auto zrows = essential_spectrum_compare(zero, Ns, 0.5, 5.5, 0.0, workers());
    bool trend = true, zeros = true;
    std::ostringstream d;
    d << "hausdorff";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        d << ' ' << fmt("%.6f", rows[i].hausdorff);
        if (i > 0 && rows[i].hausdorff > 1.1 * rows[i - 1].hausdorff) trend = false;
        if (zrows[i].hausdorff != 0.0 || zrows[i].counting_discrepancy != 0) zeros = false;
    }
    d << "; zero perturbation " << (zeros ? "identically 0" : "NONZERO");
    return {trend && zeros, d.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// 8. Criterion 5's config with 1 and 8 workers, twice each: identical bytes.
Outcome criterion8() {
    const auto base = fs::temp_directory_path() / "shnol_acceptance_c8";
    fs::remove_all(base);
    const auto cfg = wimp_config();
    std::vector<fs::path> dirs;
    std::vector<int> codes;
    for (std::size_t threads : {1, 8, 1, 8}) {
        dirs.push_back(base / ("run" + std::to_string(dirs.size()) + "_t" + std::to_string(threads)));
        codes.push_back(run(cfg, dirs.back().string(), threads));
    }
    bool same = std::all_of(codes.begin(), codes.end(), [&](int c) { return c == codes[0]; });
    int compared = 0;
    for (const char* name : {"wimp.csv", "wimp_spectrum.csv", "wimp_plot.csv", "wimp_report.txt", "wimp.meta"}) {
        const auto ref = slurp(dirs[0] / name);
        same = same && !ref.empty();
        for (std::size_t i = 1; i < dirs.size(); ++i) same = same && slurp(dirs[i] / name) == ref;
        ++compared;
    }
    fs::remove_all(base);
    return {same, std::to_string(compared) + " output files over 4 runs (1, 8, 1, 8 workers), exit code " +
                      std::to_string(codes[0]) + (same ? ", byte-identical" : ", MISMATCH")};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4,
                                                         criterion5, criterion6, criterion7, criterion8};
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            selected.push_back(std::atoi(argv[++i]));
        } else {
            std::cerr << "usage: " << argv[0] << " [--criterion k]...\n";
            return 1;
        }
    }
    if (selected.empty())
        for (int k = 1; k <= static_cast<int>(criteria.size()); ++k) selected.push_back(k);

    bool all = true;
    for (int k : selected) {
        if (k < 1 || k > static_cast<int>(criteria.size())) {
            std::cerr << "no criterion " << k << '\n';
            return 1;
        }
        Outcome o;
        try {
            o = criteria[static_cast<std::size_t>(k - 1)]();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::cout << "criterion " << k << ": " << (o.pass ? "PASS" : "FAIL") << " - " << o.detail << std::endl;
        all = all && o.pass;
    }
    return all ? 0 : 1;
}
