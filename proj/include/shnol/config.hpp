#ifndef SHNOL_CONFIG_HPP
#define SHNOL_CONFIG_HPP

// Experiment configuration: one JSON document per experiment. Parsing is
// strict (unknown keys are errors) and serialization writes every field, so
// parse -> serialize -> parse is the identity.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "shnol/certificate.hpp"
#include "shnol/coeffs.hpp"
#include "shnol/errors.hpp"
#include "shnol/perturb.hpp"
#include "shnol/recurrence.hpp"

namespace shnol {

using json = nlohmann::ordered_json;

enum class Command { solve, spectrum, classify, shnol, scan, perturb, wimp };

inline std::string_view to_string(Command c) {
    switch (c) {
        case Command::solve: return "solve";
        case Command::spectrum: return "spectrum";
        case Command::classify: return "classify";
        case Command::shnol: return "shnol";
        case Command::scan: return "scan";
        case Command::perturb: return "perturb";
        case Command::wimp: return "wimp";
    }
    return "?";
}

inline Command parse_command(const std::string& s) {
    for (auto c : {Command::solve, Command::spectrum, Command::classify, Command::shnol, Command::scan,
                   Command::perturb, Command::wimp})
        if (to_string(c) == s) return c;
    throw ConfigError("command", "unknown command '" + s + "'");
}

/// {"family": name, "params": [...]} or {"a": [...], "b": [...], "start_index": s}.
struct ModelSpec {
    std::string family = "constant";
    std::vector<double> params;
    std::vector<double> a;
    std::vector<double> b;
    std::int64_t start_index = 0;

    bool tabulated() const { return family == "tabulated"; }
    CoefficientModel build() const {
        if (tabulated()) return CoefficientModel::tabulated(a, b, start_index);
        return builtin(family, params);
    }
    bool operator==(const ModelSpec&) const = default;
};

/// Explicit list, or {"start", "stop", "step"} expanded as start + i*step.
struct GridSpec {
    bool is_range = false;
    double start = 0.0, stop = 0.0, step = 0.0;
    std::vector<double> values;

    std::vector<double> expand() const {
        if (!is_range) return values;
        std::vector<double> out;
        const auto count = static_cast<std::int64_t>(std::floor((stop - start) / step + 1e-9)) + 1;
        for (std::int64_t i = 0; i < count; ++i) out.push_back(start + static_cast<double>(i) * step);
        return out;
    }
    bool operator==(const GridSpec&) const = default;
};

/// {"family": zero|constant|inverse|linear, "params": [c]} or {"table": [...], "first": n}.
struct SequenceSpec {
    std::string family = "zero";
    std::vector<double> params;
    std::vector<double> table;
    std::int64_t first = 0;

    PerturbationSequence build(const std::string& key) const {
        const double c = params.empty() ? 0.0 : params[0];
        if (family == "zero") return PerturbationSequence::zero();
        if (family == "constant") return PerturbationSequence::constant(c);
        if (family == "inverse") return PerturbationSequence::inverse(c);
        if (family == "linear") return PerturbationSequence::linear(c);
        if (family == "tabulated") return PerturbationSequence::tabulated({first, table});
        throw ConfigError(key, "unknown perturbation family '" + family + "'");
    }
    bool operator==(const SequenceSpec&) const = default;
};

struct PerturbSpec {
    SequenceSpec eta;
    SequenceSpec psi;
    double alpha = 0.5;
    bool operator==(const PerturbSpec&) const = default;
};

struct ExperimentConfig {
    std::optional<Command> command;
    ModelSpec model;
    Form form = Form::eq1;
    std::optional<double> lambda;
    std::optional<GridSpec> lambda_grid;
    std::optional<std::int64_t> N;
    std::vector<std::int64_t> N_list;
    std::optional<std::int64_t> section_N;
    std::optional<std::int64_t> hypothesis_N;
    std::vector<std::int64_t> r_grid;
    std::vector<WindowKind> kinds;
    std::optional<std::int64_t> n0;
    std::optional<double> C1;
    double beta_cut = 1e-3;
    double rms_cut = 0.1;
    double threshold = 1e-9;
    double tol = 0.0;  ///< 0 selects the default bisection tolerance
    std::int64_t rescale_period = 1;
    std::optional<std::pair<double, double>> spectral_window;
    std::optional<PerturbSpec> perturbation;
    std::string output = "out";
    std::uint64_t seed = 0;

    std::vector<double> lambdas() const {
        if (lambda_grid) return lambda_grid->expand();
        if (lambda) return {*lambda};
        return {};
    }
    bool operator==(const ExperimentConfig&) const = default;
};

namespace detail {

template <typename T>
T get_as(const json& j, const std::string& key) {
    try {
        return j.get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(key, std::string("wrong type: ") + e.what());
    }
}

inline void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ConfigError(where, "expected an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [k, _] : j.items())
        if (!ok.count(k)) throw ConfigError(where.empty() ? k : where + "." + k, "unknown key");
}

inline WindowKind parse_kind(const std::string& s) {
    for (auto k : {WindowKind::sharp, WindowKind::linear_taper, WindowKind::cosine_taper})
        if (to_string(k) == s) return k;
    throw ConfigError("kinds", "unknown window kind '" + s + "'");
}

inline ModelSpec parse_model(const json& j) {
    ModelSpec m;
    if (j.contains("a") || j.contains("b")) {
        only_keys(j, "model", {"a", "b", "start_index"});
        if (!j.contains("a") || !j.contains("b")) throw ConfigError("model", "tabulated model needs both 'a' and 'b'");
        m.family = "tabulated";
        m.a = get_as<std::vector<double>>(j.at("a"), "model.a");
        m.b = get_as<std::vector<double>>(j.at("b"), "model.b");
        if (j.contains("start_index")) m.start_index = get_as<std::int64_t>(j.at("start_index"), "model.start_index");
        return m;
    }
    only_keys(j, "model", {"family", "params"});
    if (!j.contains("family")) throw ConfigError("model.family", "missing");
    m.family = get_as<std::string>(j.at("family"), "model.family");
    if (m.family == "tabulated") throw ConfigError("model.family", "use {\"a\": [...], \"b\": [...]} for tables");
    if (j.contains("params")) m.params = get_as<std::vector<double>>(j.at("params"), "model.params");
    return m;
}

inline json model_to_json(const ModelSpec& m) {
    if (m.tabulated()) return json{{"a", m.a}, {"b", m.b}, {"start_index", m.start_index}};
    return json{{"family", m.family}, {"params", m.params}};
}

inline GridSpec parse_grid(const json& j, const std::string& key) {
    GridSpec g;
    if (j.is_array()) {
        g.values = get_as<std::vector<double>>(j, key);
        if (g.values.empty()) throw ConfigError(key, "grid must be nonempty");
        return g;
    }
    only_keys(j, key, {"start", "stop", "step"});
    for (const char* k : {"start", "stop", "step"})
        if (!j.contains(k)) throw ConfigError(key + "." + k, "missing");
    g.is_range = true;
    g.start = get_as<double>(j.at("start"), key + ".start");
    g.stop = get_as<double>(j.at("stop"), key + ".stop");
    g.step = get_as<double>(j.at("step"), key + ".step");
    if (!(g.step > 0.0) || g.stop < g.start) throw ConfigError(key, "need step > 0 and stop >= start");
    return g;
}

inline json grid_to_json(const GridSpec& g) {
    if (g.is_range) return json{{"start", g.start}, {"stop", g.stop}, {"step", g.step}};
    return json(g.values);
}

inline SequenceSpec parse_sequence(const json& j, const std::string& key) {
    SequenceSpec s;
    if (j.contains("table")) {
        only_keys(j, key, {"table", "first"});
        s.family = "tabulated";
        s.table = get_as<std::vector<double>>(j.at("table"), key + ".table");
        if (j.contains("first")) s.first = get_as<std::int64_t>(j.at("first"), key + ".first");
        return s;
    }
    only_keys(j, key, {"family", "params"});
    if (!j.contains("family")) throw ConfigError(key + ".family", "missing");
    s.family = get_as<std::string>(j.at("family"), key + ".family");
    if (j.contains("params")) s.params = get_as<std::vector<double>>(j.at("params"), key + ".params");
    s.build(key);
    return s;
}

inline json sequence_to_json(const SequenceSpec& s) {
    if (s.family == "tabulated") return json{{"table", s.table}, {"first", s.first}};
    return json{{"family", s.family}, {"params", s.params}};
}

}  // namespace detail

inline ExperimentConfig parse_config(const json& j) {
    using detail::get_as;
    detail::only_keys(j, "",
                      {"command", "model", "form", "lambda", "lambda_grid", "N", "N_list", "section_N",
                       "hypothesis_N", "r_grid", "kinds", "n0", "C1", "beta_cut", "rms_cut", "threshold", "tol",
                       "rescale_period", "spectral_window", "perturbation", "output", "seed"});
    ExperimentConfig c;
    if (j.contains("command")) c.command = parse_command(get_as<std::string>(j.at("command"), "command"));
    if (j.contains("model")) c.model = detail::parse_model(j.at("model"));
    if (j.contains("form")) {
        const auto f = get_as<std::string>(j.at("form"), "form");
        if (f == "eq1")
            c.form = Form::eq1;
        else if (f == "eq2")
            c.form = Form::eq2;
        else
            throw ConfigError("form", "expected 'eq1' or 'eq2'");
    }
    if (j.contains("lambda")) c.lambda = get_as<double>(j.at("lambda"), "lambda");
    if (j.contains("lambda_grid")) c.lambda_grid = detail::parse_grid(j.at("lambda_grid"), "lambda_grid");
    auto positive_int = [&](const char* key) {
        const auto v = get_as<std::int64_t>(j.at(key), key);
        if (v < 1) throw ConfigError(key, "must be >= 1");
        return v;
    };
    if (j.contains("N")) c.N = positive_int("N");
    if (j.contains("section_N")) c.section_N = positive_int("section_N");
    if (j.contains("hypothesis_N")) c.hypothesis_N = positive_int("hypothesis_N");
    if (j.contains("N_list")) {
        c.N_list = get_as<std::vector<std::int64_t>>(j.at("N_list"), "N_list");
        if (c.N_list.empty()) throw ConfigError("N_list", "must be nonempty");
    }
    if (j.contains("r_grid")) {
        c.r_grid = get_as<std::vector<std::int64_t>>(j.at("r_grid"), "r_grid");
        if (c.r_grid.empty()) throw ConfigError("r_grid", "must be nonempty");
    }
    if (j.contains("kinds")) {
        for (const auto& k : get_as<std::vector<std::string>>(j.at("kinds"), "kinds"))
            c.kinds.push_back(detail::parse_kind(k));
        if (c.kinds.empty()) throw ConfigError("kinds", "must be nonempty");
    }
    if (j.contains("n0")) c.n0 = get_as<std::int64_t>(j.at("n0"), "n0");
    if (j.contains("C1")) c.C1 = get_as<double>(j.at("C1"), "C1");
    if (j.contains("beta_cut")) c.beta_cut = get_as<double>(j.at("beta_cut"), "beta_cut");
    if (j.contains("rms_cut")) c.rms_cut = get_as<double>(j.at("rms_cut"), "rms_cut");
    if (j.contains("threshold")) c.threshold = get_as<double>(j.at("threshold"), "threshold");
    if (j.contains("tol")) c.tol = get_as<double>(j.at("tol"), "tol");
    if (j.contains("rescale_period")) c.rescale_period = positive_int("rescale_period");
    if (j.contains("spectral_window")) {
        const auto w = get_as<std::vector<double>>(j.at("spectral_window"), "spectral_window");
        if (w.size() != 2 || !(w[0] < w[1])) throw ConfigError("spectral_window", "expected [lo, hi] with lo < hi");
        c.spectral_window = std::make_pair(w[0], w[1]);
    }
    if (j.contains("perturbation")) {
        const auto& p = j.at("perturbation");
        detail::only_keys(p, "perturbation", {"eta", "psi", "alpha"});
        PerturbSpec ps;
        if (p.contains("eta")) ps.eta = detail::parse_sequence(p.at("eta"), "perturbation.eta");
        if (p.contains("psi")) ps.psi = detail::parse_sequence(p.at("psi"), "perturbation.psi");
        if (p.contains("alpha")) ps.alpha = get_as<double>(p.at("alpha"), "perturbation.alpha");
        c.perturbation = ps;
    }
    if (j.contains("output")) c.output = get_as<std::string>(j.at("output"), "output");
    if (j.contains("seed")) c.seed = get_as<std::uint64_t>(j.at("seed"), "seed");
    return c;
}

inline ExperimentConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("<document>", std::string("malformed JSON: ") + e.what());
    }
    return parse_config(j);
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

inline json to_json(const ExperimentConfig& c) {
    json j;
    if (c.command) j["command"] = std::string(to_string(*c.command));
    j["model"] = detail::model_to_json(c.model);
    j["form"] = std::string(to_string(c.form));
    if (c.lambda) j["lambda"] = *c.lambda;
    if (c.lambda_grid) j["lambda_grid"] = detail::grid_to_json(*c.lambda_grid);
    if (c.N) j["N"] = *c.N;
    if (!c.N_list.empty()) j["N_list"] = c.N_list;
    if (c.section_N) j["section_N"] = *c.section_N;
    if (c.hypothesis_N) j["hypothesis_N"] = *c.hypothesis_N;
    if (!c.r_grid.empty()) j["r_grid"] = c.r_grid;
    if (!c.kinds.empty()) {
        json kinds = json::array();
        for (auto k : c.kinds) kinds.push_back(std::string(to_string(k)));
        j["kinds"] = kinds;
    }
    if (c.n0) j["n0"] = *c.n0;
    if (c.C1) j["C1"] = *c.C1;
    j["beta_cut"] = c.beta_cut;
    j["rms_cut"] = c.rms_cut;
    j["threshold"] = c.threshold;
    j["tol"] = c.tol;
    j["rescale_period"] = c.rescale_period;
    if (c.spectral_window) j["spectral_window"] = {c.spectral_window->first, c.spectral_window->second};
    if (c.perturbation) {
        j["perturbation"] = json{{"eta", detail::sequence_to_json(c.perturbation->eta)},
                                 {"psi", detail::sequence_to_json(c.perturbation->psi)},
                                 {"alpha", c.perturbation->alpha}};
    }
    j["output"] = c.output;
    j["seed"] = c.seed;
    return j;
}

inline std::string serialize(const ExperimentConfig& c) { return to_json(c).dump(2); }

}  // namespace shnol

#endif  // SHNOL_CONFIG_HPP
