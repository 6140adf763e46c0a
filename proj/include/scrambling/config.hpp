// config.hpp - experiment configuration and its sectioned key = value file
// format.
//
//   [sweep]      n_qubits, gamma (comma lists), realizations, master_seed
//   [model]      scaling (dimension | qubits), max_qubits
//   [ensemble]   mode (fresh_draw | perturbed_operator), epsilon
//   [fidelity]   dt, steps
//   [spread]     dt, steps, mode (mean_modulus | mean_real | coherent_sum | position_weighted)
//   [bootstrap]  resamples, level
//   [output]     dir, emit_full_series, emit_all_modes, json_mirror
//
// '#' starts a comment line. Absent keys keep their defaults; unknown
// sections or keys are errors.

#pragma once

#include "scrambling/core.hpp"
#include "scrambling/ensembles.hpp"
#include "scrambling/krylov.hpp"
#include "scrambling/observables.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>
#include <fmt/ranges.h>

namespace scrambling {

struct BootstrapConfig {
    int resamples = 1000;
    double level = 0.95;
};

struct ExperimentConfig {
    std::vector<int> n_qubits_list{6, 7, 8};
    std::vector<double> gamma_grid{0.1, 0.3, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0, 3.0, 4.0, 5.0, 6.0};
    int realizations = 20;
    Seed master_seed = 1;

    ScalingConvention scaling = ScalingConvention::HilbertDimension;
    int max_qubits = 12;

    EnsembleMode ensemble_mode = EnsembleMode::FreshDraw;
    double epsilon = 1e-3;

    TimeGrid fidelity_grid = TimeGrid::fidelity_default();
    TimeGrid spread_grid = TimeGrid::spread_default();
    ComplexityMode complexity_mode = ComplexityMode::MeanModulus;

    BootstrapConfig bootstrap;

    std::string output_dir = "out";
    bool emit_full_series = false;
    bool emit_all_modes = false;
    bool json_mirror = false;

    RpOptions rp_options() const { return {max_qubits, scaling}; }
    PerturbationSpec perturbation() const { return {epsilon, realizations, ensemble_mode}; }

    void validate() const {
        if (n_qubits_list.empty()) throw ConfigError("sweep.n_qubits must not be empty");
        if (max_qubits < 1) throw ConfigError("model.max_qubits must be >= 1");
        for (int n : n_qubits_list)
            if (n < 1 || n > max_qubits)
                throw ConfigError(fmt::format("sweep.n_qubits entry {} outside [1, {}]", n, max_qubits));
        if (gamma_grid.empty()) throw ConfigError("sweep.gamma must not be empty");
        for (double g : gamma_grid)
            if (!(g >= 0.0) || !std::isfinite(g)) throw ConfigError("sweep.gamma entries must be finite and >= 0");
        if (realizations < 1) throw ConfigError("sweep.realizations must be >= 1");
        if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw ConfigError("ensemble.epsilon must be > 0");
        for (const auto* g : {&fidelity_grid, &spread_grid})
            if (!(g->dt > 0.0) || !std::isfinite(g->dt) || g->steps < 1)
                throw ConfigError("time grids need dt > 0 and steps >= 1");
        if (bootstrap.resamples < 1) throw ConfigError("bootstrap.resamples must be >= 1");
        if (!(bootstrap.level > 0.0 && bootstrap.level < 1.0)) throw ConfigError("bootstrap.level must lie in (0, 1)");
        if (output_dir.empty()) throw ConfigError("output.dir must not be empty");
    }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

template <typename T>
T parse_number(std::string_view s, std::string_view key) {
    T v{};
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw ConfigError(fmt::format("{}: cannot parse '{}' as a number", key, s));
    return v;
}

inline bool parse_bool(std::string_view s, std::string_view key) {
    if (s == "true") return true;
    if (s == "false") return false;
    throw ConfigError(fmt::format("{}: expected true or false, got '{}'", key, s));
}

template <typename T>
std::vector<T> parse_list(std::string_view s, std::string_view key) {
    std::vector<T> out;
    if (trim(s).empty()) return out;
    for (auto item : split(s, ',')) out.push_back(parse_number<T>(item, key));
    return out;
}

} // namespace detail

// Shortest round-trip representation, so serialise -> parse is lossless.
inline std::string format_double(double v) { return fmt::format("{}", v); }

inline ExperimentConfig parse_config(std::string_view text) {
    using namespace detail;
    ExperimentConfig c;
    std::string section;
    std::size_t line_no = 0;
    for (auto raw : split(text, '\n')) {
        ++line_no;
        const auto line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(fmt::format("line {}: malformed section header", line_no));
            section = std::string(trim(line.substr(1, line.size() - 2)));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError(fmt::format("line {}: expected key = value", line_no));
        const std::string key = section + "." + std::string(trim(line.substr(0, eq)));
        const auto val = trim(line.substr(eq + 1));

        if (key == "sweep.n_qubits") c.n_qubits_list = parse_list<int>(val, key);
        else if (key == "sweep.gamma") c.gamma_grid = parse_list<double>(val, key);
        else if (key == "sweep.realizations") c.realizations = parse_number<int>(val, key);
        else if (key == "sweep.master_seed") c.master_seed = parse_number<Seed>(val, key);
        else if (key == "model.scaling") c.scaling = parse_scaling(val);
        else if (key == "model.max_qubits") c.max_qubits = parse_number<int>(val, key);
        else if (key == "ensemble.mode") c.ensemble_mode = parse_ensemble_mode(val);
        else if (key == "ensemble.epsilon") c.epsilon = parse_number<double>(val, key);
        else if (key == "fidelity.dt") c.fidelity_grid.dt = parse_number<double>(val, key);
        else if (key == "fidelity.steps") c.fidelity_grid.steps = parse_number<int>(val, key);
        else if (key == "spread.dt") c.spread_grid.dt = parse_number<double>(val, key);
        else if (key == "spread.steps") c.spread_grid.steps = parse_number<int>(val, key);
        else if (key == "spread.mode") c.complexity_mode = parse_complexity_mode(val);
        else if (key == "bootstrap.resamples") c.bootstrap.resamples = parse_number<int>(val, key);
        else if (key == "bootstrap.level") c.bootstrap.level = parse_number<double>(val, key);
        else if (key == "output.dir") c.output_dir = std::string(val);
        else if (key == "output.emit_full_series") c.emit_full_series = parse_bool(val, key);
        else if (key == "output.emit_all_modes") c.emit_all_modes = parse_bool(val, key);
        else if (key == "output.json_mirror") c.json_mirror = parse_bool(val, key);
        else throw ConfigError(fmt::format("line {}: unknown key '{}'", line_no, key));
    }
    c.validate();
    return c;
}

inline std::string serialize(const ExperimentConfig& c) {
    std::vector<std::string> gammas;
    for (double g : c.gamma_grid) gammas.push_back(format_double(g));
    std::string s;
    s += "[sweep]\n";
    s += fmt::format("n_qubits = {}\n", fmt::join(c.n_qubits_list, ", "));
    s += fmt::format("gamma = {}\n", fmt::join(gammas, ", "));
    s += fmt::format("realizations = {}\n", c.realizations);
    s += fmt::format("master_seed = {}\n", c.master_seed);
    s += "\n[model]\n";
    s += fmt::format("scaling = {}\n", to_string(c.scaling));
    s += fmt::format("max_qubits = {}\n", c.max_qubits);
    s += "\n[ensemble]\n";
    s += fmt::format("mode = {}\n", to_string(c.ensemble_mode));
    s += fmt::format("epsilon = {}\n", format_double(c.epsilon));
    s += "\n[fidelity]\n";
    s += fmt::format("dt = {}\nsteps = {}\n", format_double(c.fidelity_grid.dt), c.fidelity_grid.steps);
    s += "\n[spread]\n";
    s += fmt::format("dt = {}\nsteps = {}\n", format_double(c.spread_grid.dt), c.spread_grid.steps);
    s += fmt::format("mode = {}\n", to_string(c.complexity_mode));
    s += "\n[bootstrap]\n";
    s += fmt::format("resamples = {}\nlevel = {}\n", c.bootstrap.resamples, format_double(c.bootstrap.level));
    s += "\n[output]\n";
    s += fmt::format("dir = {}\n", c.output_dir);
    s += fmt::format("emit_full_series = {}\n", c.emit_full_series);
    s += fmt::format("emit_all_modes = {}\n", c.emit_all_modes);
    s += fmt::format("json_mirror = {}\n", c.json_mirror);
    return s;
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline ExperimentConfig load_config(const std::filesystem::path& path) { return parse_config(read_text_file(path)); }

inline bool operator==(const TimeGrid& a, const TimeGrid& b) { return a.dt == b.dt && a.steps == b.steps; }
inline bool operator==(const BootstrapConfig& a, const BootstrapConfig& b) {
    return a.resamples == b.resamples && a.level == b.level;
}
inline bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
    return a.n_qubits_list == b.n_qubits_list && a.gamma_grid == b.gamma_grid && a.realizations == b.realizations &&
           a.master_seed == b.master_seed && a.scaling == b.scaling && a.max_qubits == b.max_qubits &&
           a.ensemble_mode == b.ensemble_mode && a.epsilon == b.epsilon && a.fidelity_grid == b.fidelity_grid &&
           a.spread_grid == b.spread_grid && a.complexity_mode == b.complexity_mode && a.bootstrap == b.bootstrap &&
           a.output_dir == b.output_dir && a.emit_full_series == b.emit_full_series &&
           a.emit_all_modes == b.emit_all_modes && a.json_mirror == b.json_mirror;
}

} // namespace scrambling
