#ifndef SHNOL_EXPERIMENT_HPP
#define SHNOL_EXPERIMENT_HPP

// Batch commands. Every command writes <out>/<command>.csv and
// <out>/<command>.meta; some add a two-column *_plot.csv. Rows are computed
// in parallel and written in grid order, so files do not depend on the
// worker count.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "shnol/certificate.hpp"
#include "shnol/classify.hpp"
#include "shnol/config.hpp"
#include "shnol/csv.hpp"
#include "shnol/errors.hpp"
#include "shnol/parallel.hpp"
#include "shnol/perturb.hpp"
#include "shnol/recurrence.hpp"
#include "shnol/spectrum.hpp"

namespace shnol {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kExitOk = 0, kExitError = 1, kExitHypothesis = 2 };

namespace detail {

inline bool verbose() {
    const char* v = std::getenv("SHNOL_VERBOSE");
    return v != nullptr && *v != '\0' && std::string(v) != "0";
}

inline void progress(const std::string& msg) {
    if (verbose()) std::cerr << "[shnol] " << msg << '\n';
}

inline std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream os(p, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot write '" + p.string() + "'");
    return os;
}

inline std::int64_t require(const std::optional<std::int64_t>& v, const char* key) {
    if (!v) throw ConfigError(key, "missing");
    return *v;
}

/// Key/value lines, then the echoed configuration as one JSON line.
class Meta {
public:
    template <typename T>
    void put(const std::string& key, const T& value) {
        lines_ << key << '=' << csv::format(value) << '\n';
    }
    void put(const std::string& key, bool value) { put_text(key, value ? "true" : "false"); }
    void put_text(const std::string& key, const std::string& value) { lines_ << key << '=' << value << '\n'; }

    void write(const std::filesystem::path& p, const ExperimentConfig& cfg, Command cmd) const {
        auto os = open_out(p);
        os << "tool=shnol\nversion=" << kVersion << "\ncommand=" << to_string(cmd) << '\n';
        os << "beta_cut=" << csv::format(cfg.beta_cut) << "\nrms_cut=" << csv::format(cfg.rms_cut)
           << "\nthreshold=" << csv::format(cfg.threshold) << '\n';
        os << lines_.str();
        os << "config=" << to_json(cfg).dump() << '\n';
    }

private:
    std::ostringstream lines_;
};

}  // namespace detail

struct ScanRow {
    double lambda = 0.0;
    double beta_hat = 0.0;
    double theta_hat = 0.0;
    double residual_rms = 0.0;
    bool in_E = false;
    double dist = 0.0;
    std::string error;  ///< nonempty if this grid point failed
};

struct ScanResult {
    std::vector<ScanRow> rows;
    std::int64_t members = 0;
    double max_dist_in_E = 0.0;
    std::int64_t failures = 0;
};

/// For each lambda: solve on [start, start + N], fit growth on the second
/// half, and call lambda a member of E^ when the polynomial fit residual is
/// at most rms_cut and beta_hat at most beta_cut. dist is measured against the
/// section of size section_N (default N).
inline ScanResult run_scan(const ExperimentConfig& cfg, std::size_t threads = 1) {
    const auto lambdas = cfg.lambdas();
    if (lambdas.empty()) throw ConfigError("lambda_grid", "scan needs a nonempty lambda grid");
    const std::int64_t N = detail::require(cfg.N, "N");
    if (N < 32) throw ConfigError("N", "scan needs N >= 32");
    const auto model = cfg.model.build();
    const std::int64_t s = model.start_index();

    const auto spec = eigenvalues(finite_section(model, cfg.section_N.value_or(N)), cfg.tol, threads);
    ScanResult out;
    out.rows.resize(lambdas.size());
    parallel_for(lambdas.size(), threads, [&](std::size_t i) {
        ScanRow& row = out.rows[i];
        row.lambda = lambdas[i];
        try {
            const auto sol = solve(model, row.lambda, cfg.form, N, cfg.rescale_period);
            const auto g = estimate_growth(sol, s + N / 2, s + N);
            row.beta_hat = g.beta_hat;
            row.theta_hat = g.theta_hat;
            row.residual_rms = g.poly_rms;
            row.in_E = g.poly_rms <= cfg.rms_cut && g.beta_hat <= cfg.beta_cut;
            row.dist = spectral_distance(spec, row.lambda);
        } catch (const std::exception& e) {
            const double nan = std::numeric_limits<double>::quiet_NaN();
            row.beta_hat = row.theta_hat = row.residual_rms = row.dist = nan;
            row.in_E = false;
            row.error = e.what();
        }
    });
    for (const auto& r : out.rows) {
        if (!r.error.empty()) ++out.failures;
        if (r.in_E) {
            ++out.members;
            out.max_dist_in_E = std::max(out.max_dist_in_E, r.dist);
        }
    }
    return out;
}

inline void write_csv(std::ostream& os, const ScanResult& res) {
    csv::row(os, "lambda", "beta_hat", "theta_hat", "in_E", "dist");
    for (const auto& r : res.rows) csv::row(os, r.lambda, r.beta_hat, r.theta_hat, r.in_E, r.dist);
}

struct CertificateRow {
    WeylCertificate cert;
    std::string error;
};

/// Optimized certificate per lambda. The solution runs to N steps, by default
/// four sites past the largest r.
inline std::vector<CertificateRow> run_certificates(const CoefficientModel& model, const ExperimentConfig& cfg,
                                                    const std::vector<double>& lambdas,
                                                    const std::vector<std::int64_t>& r_grid,
                                                    const std::vector<WindowKind>& kinds, std::size_t threads) {
    if (r_grid.empty()) throw ConfigError("r_grid", "missing");
    if (kinds.empty()) throw ConfigError("kinds", "missing");
    const std::int64_t s = model.start_index();
    const std::int64_t r_max = *std::max_element(r_grid.begin(), r_grid.end());
    const std::int64_t N = cfg.N.value_or(r_max + 4 - s);
    const std::int64_t n0 = cfg.n0.value_or(s);
    std::vector<CertificateRow> rows(lambdas.size());
    parallel_for(lambdas.size(), threads, [&](std::size_t i) {
        try {
            const auto sol = solve(model, lambdas[i], cfg.form, N, cfg.rescale_period);
            rows[i].cert = optimize_certificate(model, lambdas[i], sol, r_grid, kinds, n0, cfg.threshold);
            rows[i].cert.residual = {};
        } catch (const std::exception& e) {
            rows[i].cert.lambda = lambdas[i];
            rows[i].cert.bound = std::numeric_limits<double>::quiet_NaN();
            rows[i].error = e.what();
        }
    });
    return rows;
}

struct WimpSummary {
    HypothesisReport report;
    std::vector<CertificateRow> certificates;
    SpectrumApproximation spectrum;
    double max_bound = 0.0;
    double max_gap = 0.0;
    double window_lo = 0.0;
    double window_hi = 0.0;
};

/// Defaults of the wimp preset; explicit config keys override them.
inline ExperimentConfig wimp_defaults(ExperimentConfig cfg) {
    cfg.model = ModelSpec{"wimp", {}, {}, {}, 0};
    if (!cfg.lambda_grid && !cfg.lambda) cfg.lambda_grid = GridSpec{true, -3.0, 3.0, 0.25, {}};
    if (cfg.r_grid.empty()) cfg.r_grid = {1000, 2000, 5000, 10000, 20000, 50000, 100000};
    if (cfg.kinds.empty()) cfg.kinds = {WindowKind::linear_taper, WindowKind::cosine_taper};
    if (!cfg.section_N) cfg.section_N = 2000;
    if (!cfg.hypothesis_N) cfg.hypothesis_N = 100000;
    return cfg;
}

inline WimpSummary run_wimp(const ExperimentConfig& given, std::size_t threads = 1) {
    const auto cfg = wimp_defaults(given);
    const auto model = cfg.model.build();
    const auto lambdas = cfg.lambdas();
    WimpSummary out;
    out.report = hypothesis_report(model, cfg.n0, *cfg.hypothesis_N, cfg.C1);
    detail::progress("wimp: hypothesis report done");
    out.certificates = run_certificates(model, cfg, lambdas, cfg.r_grid, cfg.kinds, threads);
    detail::progress("wimp: certificates done");
    out.spectrum = eigenvalues(finite_section(model, *cfg.section_N), cfg.tol, threads);
    out.window_lo = *std::min_element(lambdas.begin(), lambdas.end());
    out.window_hi = *std::max_element(lambdas.begin(), lambdas.end());
    out.max_gap = out.window_lo < out.window_hi ? spectrum_gaps(out.spectrum, out.window_lo, out.window_hi) : 0.0;
    for (const auto& row : out.certificates)
        out.max_bound = std::isnan(row.cert.bound) ? row.cert.bound : std::max(out.max_bound, row.cert.bound);
    return out;
}

namespace detail {

inline int run_command(const ExperimentConfig& given, Command cmd, const std::filesystem::path& out,
                       std::size_t threads) {
    const ExperimentConfig cfg = cmd == Command::wimp ? wimp_defaults(given) : given;
    Meta meta;
    const auto csv_path = out / (std::string(to_string(cmd)) + ".csv");
    const auto plot_path = out / (std::string(to_string(cmd)) + "_plot.csv");
    int code = kExitOk;

    switch (cmd) {
        case Command::solve: {
            if (!cfg.lambda) throw ConfigError("lambda", "solve needs a single lambda");
            const std::int64_t N = require(cfg.N, "N");
            const auto model = cfg.model.build();
            const auto sol = solve(model, *cfg.lambda, cfg.form, N, cfg.rescale_period);
            auto os = open_out(csv_path);
            write_csv(os, sol);
            auto plot = open_out(plot_path);
            csv::row(plot, "n", "log_abs_y");
            for (std::int64_t n = sol.first_index(); n <= sol.last_index(); ++n) csv::row(plot, n, sol.log_abs(n));
            meta.put("max_relative_residual", max_relative_residual(model, sol));
            if (N >= 32) {
                const auto s = model.start_index();
                const auto g = estimate_growth(sol, s + N / 2, s + N);
                meta.put("beta_hat", g.beta_hat);
                meta.put("theta_hat", g.theta_hat);
                meta.put("log_C2", g.log_C2);
                meta.put("log_C4", g.log_C4);
                meta.put("poly_rms", g.poly_rms);
                meta.put("exp_rms", g.exp_rms);
            }
            break;
        }
        case Command::spectrum: {
            const std::int64_t N = cfg.section_N ? *cfg.section_N : require(cfg.N, "N");
            const auto spec = eigenvalues(finite_section(cfg.model.build(), N, cfg.form), cfg.tol, threads);
            auto os = open_out(csv_path);
            write_csv(os, spec);
            meta.put("N", N);
            meta.put("tol", spec.tol);
            if (!spec.eigenvalues.empty()) {
                meta.put("lambda_min", spec.eigenvalues.front());
                meta.put("lambda_max", spec.eigenvalues.back());
            }
            if (cfg.spectral_window)
                meta.put("max_gap", spectrum_gaps(spec, cfg.spectral_window->first, cfg.spectral_window->second));
            break;
        }
        case Command::classify: {
            const std::int64_t N = cfg.hypothesis_N ? *cfg.hypothesis_N : require(cfg.N, "N");
            const auto rep = hypothesis_report(cfg.model.build(), cfg.n0, N, cfg.C1);
            auto os = open_out(csv_path);
            write_report_csv_header(os);
            write_report_csv_row(os, rep);
            std::ostringstream kv;
            write_key_values(kv, rep);
            std::istringstream lines(kv.str());
            for (std::string line; std::getline(lines, line);) meta.put_text("report." + line.substr(0, line.find('=')),
                                                                             line.substr(line.find('=') + 1));
            if (!rep.eligible()) code = kExitHypothesis;
            break;
        }
        case Command::shnol: {
            const auto lambdas = cfg.lambdas();
            if (lambdas.empty()) throw ConfigError("lambda", "shnol needs lambda or lambda_grid");
            const auto kinds = cfg.kinds.empty() ? std::vector<WindowKind>{WindowKind::sharp, WindowKind::linear_taper,
                                                                           WindowKind::cosine_taper}
                                                 : cfg.kinds;
            const auto rows = run_certificates(cfg.model.build(), cfg, lambdas, cfg.r_grid, kinds, threads);
            auto os = open_out(csv_path);
            auto plot = open_out(plot_path);
            write_certificate_csv_header(os);
            csv::row(plot, "lambda", "bound");
            std::int64_t failures = 0;
            double max_bound = 0.0;
            for (const auto& r : rows) {
                if (!r.error.empty()) {
                    ++failures;
                    std::cerr << "shnol: lambda=" << csv::format(r.cert.lambda) << ": " << r.error << '\n';
                    continue;
                }
                write_certificate_csv_row(os, r.cert);
                csv::row(plot, r.cert.lambda, r.cert.bound);
                max_bound = std::max(max_bound, r.cert.bound);
            }
            meta.put("max_bound", max_bound);
            meta.put("failures", failures);
            if (failures > 0) code = kExitError;
            break;
        }
        case Command::scan: {
            const auto res = run_scan(cfg, threads);
            auto os = open_out(csv_path);
            write_csv(os, res);
            auto plot = open_out(plot_path);
            csv::row(plot, "lambda", "dist");
            for (const auto& r : res.rows) csv::row(plot, r.lambda, r.dist);
            for (const auto& r : res.rows)
                if (!r.error.empty()) std::cerr << "scan: lambda=" << csv::format(r.lambda) << ": " << r.error << '\n';
            meta.put("members", res.members);
            meta.put("max_dist_in_E", res.max_dist_in_E);
            meta.put("failures", res.failures);
            std::cout << "max dist over E^: " << csv::format(res.max_dist_in_E) << " (" << res.members << " of "
                      << res.rows.size() << " grid points in E^)\n";
            if (res.failures > 0) code = kExitError;
            break;
        }
        case Command::perturb: {
            if (!cfg.perturbation) throw ConfigError("perturbation", "missing");
            if (cfg.N_list.empty()) throw ConfigError("N_list", "missing");
            if (!cfg.spectral_window) throw ConfigError("spectral_window", "missing");
            const PerturbationPair pair{cfg.model.build(), cfg.perturbation->eta.build("perturbation.eta"),
                                        cfg.perturbation->psi.build("perturbation.psi"), cfg.perturbation->alpha};
            const auto rows = essential_spectrum_compare(pair, cfg.N_list, cfg.spectral_window->first,
                                                         cfg.spectral_window->second, cfg.tol, threads);
            auto os = open_out(csv_path);
            write_csv(os, rows);
            auto plot = open_out(plot_path);
            csv::row(plot, "N", "hausdorff");
            for (const auto& r : rows) csv::row(plot, r.N, r.hausdorff);
            const std::int64_t hN =
                cfg.hypothesis_N.value_or(*std::max_element(cfg.N_list.begin(), cfg.N_list.end()));
            const auto v = check_theorem5_hypotheses(pair, hN);
            meta.put_text("alpha_from", v.alpha_from ? std::to_string(*v.alpha_from) : "none");
            meta.put("eta_decreasing", v.eta_decreasing);
            meta.put("psi_decreasing", v.psi_decreasing);
            meta.put("min_a_plus_eta", v.min_a_plus_eta);
            meta.put("row_sum_bound", perturbation_row_sum_bound(pair, cfg.N_list.back()));
            meta.put("hypotheses_satisfied", v.satisfied());
            if (!v.satisfied()) code = kExitHypothesis;
            break;
        }
        case Command::wimp: {
            const auto w = run_wimp(cfg, threads);
            auto os = open_out(csv_path);
            write_certificate_csv_header(os);
            for (const auto& r : w.certificates) {
                if (!r.error.empty()) {
                    std::cerr << "wimp: lambda=" << csv::format(r.cert.lambda) << ": " << r.error << '\n';
                    code = kExitError;
                    continue;
                }
                write_certificate_csv_row(os, r.cert);
            }
            auto spec_os = open_out(out / "wimp_spectrum.csv");
            write_csv(spec_os, w.spectrum);
            auto rep_os = open_out(out / "wimp_report.txt");
            write_key_values(rep_os, w.report);
            auto plot = open_out(plot_path);
            csv::row(plot, "lambda", "bound");
            for (const auto& r : w.certificates) csv::row(plot, r.cert.lambda, r.cert.bound);
            meta.put("eligible", w.report.eligible());
            meta.put("max_bound", w.max_bound);
            meta.put("max_gap", w.max_gap);
            meta.put("window_lo", w.window_lo);
            meta.put("window_hi", w.window_hi);
            if (code == kExitOk && !w.report.eligible()) code = kExitHypothesis;
            break;
        }
    }
    meta.write(out / (std::string(to_string(cmd)) + ".meta"), cfg, cmd);
    return code;
}

}  // namespace detail

/// Runs one experiment. out_dir overrides the config's output path when
/// nonempty. Returns 0 on success, 2 when a hypothesis verdict is negative and
/// 1 on any error; diagnostics go to `err`.
inline int run(const ExperimentConfig& cfg, Command cmd, const std::string& out_dir = "", std::size_t threads = 1,
               std::ostream& err = std::cerr) {
    try {
        if (cfg.command && *cfg.command != cmd)
            throw ConfigError("command", "config is for '" + std::string(to_string(*cfg.command)) +
                                             "', not '" + std::string(to_string(cmd)) + "'");
        const std::filesystem::path out = out_dir.empty() ? cfg.output : out_dir;
        std::error_code ec;
        std::filesystem::create_directories(out, ec);
        if (ec) throw IoError("cannot create output directory '" + out.string() + "': " + ec.message());
        return detail::run_command(cfg, cmd, out, std::max<std::size_t>(1, threads));
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
}

inline int run(const ExperimentConfig& cfg, const std::string& out_dir = "", std::size_t threads = 1,
               std::ostream& err = std::cerr) {
    if (!cfg.command) {
        err << "error: config key 'command': missing\n";
        return kExitError;
    }
    return run(cfg, *cfg.command, out_dir, threads, err);
}

}  // namespace shnol

#endif  // SHNOL_EXPERIMENT_HPP
