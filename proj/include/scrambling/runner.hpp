// runner.hpp - experiment orchestration: per-cell pipeline, seeded sweeps,
// bootstrap summaries, validation report and plot-data emission.
//
// Output directory layout of a sweep:
//   results.csv   one row per (gamma, n_qubits, realization)
//   summary.csv   one row per (gamma, n_qubits, observable)
//   timings.csv   wall time per cell (kept out of results.csv)
//   config.txt    configuration echo
//   manifest.json versions, seed, timestamps, cell counts
//   cells/        atomically written per-cell rows (used by --resume)
//   series/       per-cell time series and Lanczos coefficients
//                 (only with output.emit_full_series = true)

#pragma once

#include "scrambling/config.hpp"
#include "scrambling/core.hpp"
#include "scrambling/ensembles.hpp"
#include "scrambling/krylov.hpp"
#include "scrambling/observables.hpp"
#include "scrambling/rng.hpp"
#include "scrambling/spectral.hpp"
#include "scrambling/states.hpp"
#include "scrambling/stats.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <fmt/format.h>
#include <json.hpp>

namespace scrambling {

inline constexpr std::string_view kVersion = "1.0.0";

namespace fs = std::filesystem;

// ---------------------------------------------------------------- rows ----

struct ResultRow {
    double gamma = 0.0;
    int n_qubits = 0;
    int realization = 0;
    Seed seed = 0;
    bool ok = false;
    std::string error;

    double F_A = std::nan("");
    double F_A_timeavg = std::nan("");
    double C_A = std::nan("");
    double C_A_timeavg = std::nan("");
    double F_0 = std::nan("");
    double F_max = std::nan("");
    int krylov_k = 0;
    std::optional<std::array<double, 4>> C_A_modes;  // indexed like kAllComplexityModes

    double wall_time_ms = 0.0;  // not part of results.csv
};

inline std::vector<std::string> result_columns(bool all_modes) {
    std::vector<std::string> cols{"gamma", "n_qubits", "realization", "seed",        "status", "error",
                                  "F_A",   "F_A_timeavg", "C_A",      "C_A_timeavg", "F_0",    "F_max",
                                  "krylov_k"};
    if (all_modes)
        for (auto m : kAllComplexityModes) cols.push_back("C_A_" + std::string(to_string(m)));
    return cols;
}

namespace detail {

inline std::string num(double v) { return std::isfinite(v) ? format_double(v) : std::string(); }

inline std::string join(const std::vector<std::string>& v, char sep = ',') {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += sep;
        s += v[i];
    }
    return s;
}

inline double to_double(const std::string& s) {
    if (s.empty()) return std::nan("");
    return parse_number<double>(s, "csv");
}

} // namespace detail

inline std::string format_row(const ResultRow& r, bool all_modes) {
    using detail::num;
    std::vector<std::string> f{format_double(r.gamma),
                               std::to_string(r.n_qubits),
                               std::to_string(r.realization),
                               std::to_string(r.seed),
                               r.ok ? "ok" : "failed",
                               r.error,
                               num(r.F_A),
                               num(r.F_A_timeavg),
                               num(r.C_A),
                               num(r.C_A_timeavg),
                               num(r.F_0),
                               num(r.F_max),
                               r.ok ? std::to_string(r.krylov_k) : std::string()};
    if (all_modes)
        for (std::size_t m = 0; m < 4; ++m) f.push_back(r.C_A_modes ? num((*r.C_A_modes)[m]) : std::string());
    return detail::join(f);
}

// ----------------------------------------------------------------- csv ----

struct CsvTable {
    std::map<std::string, std::string> meta;  // from "# key: value" lines
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw PreconditionError("csv: missing column '" + name + "'");
        return static_cast<std::size_t>(it - header.begin());
    }
};

inline CsvTable read_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw PreconditionError("cannot open " + path.string());
    CsvTable t;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') {
            const auto colon = line.find(':');
            if (colon != std::string::npos)
                t.meta[std::string(detail::trim(std::string_view(line).substr(1, colon - 1)))] =
                    std::string(detail::trim(std::string_view(line).substr(colon + 1)));
            continue;
        }
        std::vector<std::string> fields;
        for (auto f : detail::split(line, ',')) fields.emplace_back(f);
        if (t.header.empty()) t.header = std::move(fields);
        else t.rows.push_back(std::move(fields));
    }
    return t;
}

inline ResultRow parse_row(const CsvTable& t, const std::vector<std::string>& f) {
    using detail::to_double;
    ResultRow r;
    auto at = [&](const char* name) -> const std::string& { return f.at(t.column(name)); };
    r.gamma = to_double(at("gamma"));
    r.n_qubits = detail::parse_number<int>(at("n_qubits"), "n_qubits");
    r.realization = detail::parse_number<int>(at("realization"), "realization");
    r.seed = detail::parse_number<Seed>(at("seed"), "seed");
    r.ok = at("status") == "ok";
    r.error = at("error");
    r.F_A = to_double(at("F_A"));
    r.F_A_timeavg = to_double(at("F_A_timeavg"));
    r.C_A = to_double(at("C_A"));
    r.C_A_timeavg = to_double(at("C_A_timeavg"));
    r.F_0 = to_double(at("F_0"));
    r.F_max = to_double(at("F_max"));
    r.krylov_k = at("krylov_k").empty() ? 0 : detail::parse_number<int>(at("krylov_k"), "krylov_k");
    if (std::find(t.header.begin(), t.header.end(), "C_A_mean_modulus") != t.header.end()) {
        std::array<double, 4> modes{};
        for (std::size_t m = 0; m < 4; ++m)
            modes[m] = to_double(f.at(t.column("C_A_" + std::string(to_string(kAllComplexityModes[m])))));
        r.C_A_modes = modes;
    }
    return r;
}

inline void write_atomic(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw PreconditionError("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw PreconditionError("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

// ------------------------------------------------------------- pipeline ----

inline std::string cell_stem(int n_qubits, double gamma, int realization) {
    return fmt::format("n{}_g{}_r{}", n_qubits, format_double(gamma), realization);
}

/// The Hamiltonian of one sweep cell. FreshDraw: an independent RP draw per
/// realization. PerturbedOperator: one base draw per (n_qubits, gamma) and
/// realization r is ensemble member r around it.
inline RpHamiltonian realization_hamiltonian(const ExperimentConfig& cfg, int n_qubits, double gamma,
                                             int realization) {
    if (cfg.ensemble_mode == EnsembleMode::FreshDraw)
        return build_rp(n_qubits, gamma, cell_seed(cfg.master_seed, n_qubits, gamma, realization), cfg.rp_options());
    const Seed base_seed = derive_seed(cell_seed(cfg.master_seed, n_qubits, gamma, 0), {0xba5e});
    const RpHamiltonian base = build_rp(n_qubits, gamma, base_seed, cfg.rp_options());
    return ensemble_member(base, cfg.perturbation(), derive_seed(base_seed, {0xe75}), realization, cfg.rp_options());
}

struct CellArtifacts {
    TimeSeries fidelity;
    TimeSeries spread;                     // selected mode
    std::vector<TimeSeries> spread_modes;  // all modes, when emit_all_modes
    RealVector a, b;
};

struct CellOutput {
    ResultRow row;
    std::optional<CellArtifacts> artifacts;
};

// Hook for fault-injection tests; production runs leave it empty.
struct PipelineHooks {
    bool reorthogonalize = true;
};

/// seed -> H -> diagonalize -> GHZ -> Lanczos (k = D) -> validate ->
/// fidelity + spread series -> integrals. Library errors turn the row into
/// a failed row carrying the error code; they never propagate.
inline CellOutput run_single(const ExperimentConfig& cfg, int n_qubits, double gamma, int realization,
                             const PipelineHooks& hooks = {}) {
    const auto start = std::chrono::steady_clock::now();
    CellOutput out;
    ResultRow& row = out.row;
    row.gamma = gamma;
    row.n_qubits = n_qubits;
    row.realization = realization;
    try {
        const RpHamiltonian h = realization_hamiltonian(cfg, n_qubits, gamma, realization);
        row.seed = h.seed;
        const SpectralDecomposition sd = diagonalize(h);
        const StateVector psi0 = ghz_state(QubitCount(n_qubits));

        LanczosOptions lo;
        lo.reorthogonalize = hooks.reorthogonalize;
        const LanczosResult lr = lanczos(h.matrix, psi0, lo);
        const BasisValidation v = validate_basis(lr.basis, h.matrix, sd.eigenvalues);
        if (!v.passed())
            throw ValidationFailure(fmt::format("Krylov basis failed validation: orthonormality {:.3g}, spectrum {:.3g}, "
                                                "recursion {:.3g}",
                                                v.orthonormality_defect, v.spectrum_defect.value_or(0.0),
                                                v.recursion_defect));
        row.krylov_k = static_cast<int>(lr.basis.size());

        SeriesMetadata meta{gamma, n_qubits, realization, {}};
        TimeSeries fid = fidelity_series(sd, psi0, cfg.fidelity_grid);
        fid.meta = meta;
        row.F_0 = std::norm(overlap(psi0, evolve(sd, psi0, 0.0)));
        row.F_max = *std::max_element(fid.values.begin(), fid.values.end());
        row.F_A = integrate(fid).value;
        row.F_A_timeavg = time_average(fid);

        std::vector<TimeSeries> modes;
        TimeSeries spread;
        if (cfg.emit_all_modes) {
            modes = spread_series_all_modes(lr.basis, sd, psi0, cfg.spread_grid);
            std::array<double, 4> ca{};
            for (std::size_t m = 0; m < modes.size(); ++m) {
                modes[m].meta = meta;
                modes[m].meta.mode = std::string(to_string(kAllComplexityModes[m]));
                ca[m] = integrate(modes[m]).value;
                if (kAllComplexityModes[m] == cfg.complexity_mode) spread = modes[m];
            }
            row.C_A_modes = ca;
        } else {
            spread = spread_series(lr.basis, sd, psi0, cfg.spread_grid, cfg.complexity_mode);
            spread.meta = meta;
            spread.meta.mode = std::string(to_string(cfg.complexity_mode));
        }
        row.C_A = integrate(spread).value;
        row.C_A_timeavg = time_average(spread);
        row.ok = true;

        if (cfg.emit_full_series)
            out.artifacts = CellArtifacts{std::move(fid), std::move(spread), std::move(modes), lr.basis.a, lr.basis.b};
    } catch (const Error& e) {
        row.ok = false;
        row.error = e.code();
    } catch (const std::exception&) {
        row.ok = false;
        row.error = "internal";
    }
    row.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return out;
}

// ---------------------------------------------------------------- sweep ----

struct SummaryRow {
    double gamma = 0.0;
    int n_qubits = 0;
    std::string observable;  // "F_A" or "C_A"
    BootstrapSummary summary;
    int count = 0;
};

struct SweepOptions {
    int workers = 0;  // 0: hardware concurrency
    bool resume = false;
    std::optional<std::string> config_text;  // echoed verbatim when given
    PipelineHooks hooks;
};

struct SweepResult {
    std::vector<ResultRow> rows;
    std::vector<SummaryRow> summaries;
    int failed = 0;
};

struct Cell {
    int n_qubits;
    double gamma;
    int realization;
};

inline std::vector<Cell> enumerate_cells(const ExperimentConfig& cfg) {
    std::vector<Cell> cells;
    for (int n : cfg.n_qubits_list)
        for (double g : cfg.gamma_grid)
            for (int r = 0; r < cfg.realizations; ++r) cells.push_back({n, g, r});
    return cells;
}

inline std::string results_preamble(const ExperimentConfig& cfg) {
    std::string s;
    s += "# scrambling results\n";
    s += fmt::format("# master_seed: {}\n", cfg.master_seed);
    s += fmt::format("# ensemble_mode: {}\n", to_string(cfg.ensemble_mode));
    s += fmt::format("# scaling: {}\n", to_string(cfg.scaling));
    s += fmt::format("# complexity_mode: {}\n", to_string(cfg.complexity_mode));
    s += "# integration: left_riemann over tau_1..tau_steps\n";
    s += fmt::format("# fidelity_grid: dt={} steps={}\n", format_double(cfg.fidelity_grid.dt), cfg.fidelity_grid.steps);
    s += fmt::format("# spread_grid: dt={} steps={}\n", format_double(cfg.spread_grid.dt), cfg.spread_grid.steps);
    s += fmt::format("# emit_full_series: {}\n", cfg.emit_full_series);
    s += fmt::format("# emit_all_modes: {}\n", cfg.emit_all_modes);
    return s;
}

inline std::string format_results(const ExperimentConfig& cfg, const std::vector<ResultRow>& rows) {
    std::string s = results_preamble(cfg);
    s += detail::join(result_columns(cfg.emit_all_modes)) + "\n";
    for (const auto& r : rows) s += format_row(r, cfg.emit_all_modes) + "\n";
    return s;
}

inline std::vector<SummaryRow> summarize(const ExperimentConfig& cfg, const std::vector<ResultRow>& rows) {
    std::vector<SummaryRow> out;
    for (int n : cfg.n_qubits_list) {
        for (double g : cfg.gamma_grid) {
            std::vector<double> fa, ca;
            for (const auto& r : rows) {
                if (!r.ok || r.n_qubits != n || r.gamma != g) continue;
                fa.push_back(r.F_A);
                ca.push_back(r.C_A);
            }
            int obs_id = 0;
            using Named = std::pair<const char*, std::vector<double>*>;
            for (auto [name, values] : std::initializer_list<Named>{{"F_A", &fa}, {"C_A", &ca}}) {
                SummaryRow s;
                s.gamma = g;
                s.n_qubits = n;
                s.observable = name;
                s.count = static_cast<int>(values->size());
                const Seed seed = derive_seed(cfg.master_seed, {static_cast<std::uint64_t>(n), bits_of(g),
                                                                static_cast<std::uint64_t>(obs_id++), 0xb007});
                if (values->empty()) {
                    s.summary.mean = s.summary.ci_low = s.summary.ci_high = std::nan("");
                    s.summary.level = cfg.bootstrap.level;
                    s.summary.resamples = cfg.bootstrap.resamples;
                    s.summary.seed = seed;
                } else {
                    s.summary = bootstrap_ci(*values, cfg.bootstrap.resamples, cfg.bootstrap.level, seed);
                }
                out.push_back(std::move(s));
            }
        }
    }
    return out;
}

inline std::string format_summary(const ExperimentConfig& cfg, const std::vector<SummaryRow>& rows) {
    std::string s = "# scrambling summary\n";
    s += "# bootstrap: percentile interval of the resampled mean\n";
    s += fmt::format("# complexity_mode: {}\n", to_string(cfg.complexity_mode));
    s += "gamma,n_qubits,observable,mean,ci_low,ci_high,resamples,level,count,degenerate\n";
    for (const auto& r : rows)
        s += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", format_double(r.gamma), r.n_qubits, r.observable,
                         detail::num(r.summary.mean), detail::num(r.summary.ci_low), detail::num(r.summary.ci_high),
                         r.summary.resamples, format_double(r.summary.level), r.count, r.summary.degenerate);
    return s;
}

namespace detail {

inline std::string series_text(const TimeSeries& s) {
    std::ostringstream os;
    write_series_csv(os, s);
    return os.str();
}

inline std::string lanczos_text(const CellArtifacts& a, int n_qubits, double gamma, int realization) {
    std::string s = fmt::format("# gamma: {}\n# n_qubits: {}\n# realization: {}\nn,a_n,b_n\n", format_double(gamma),
                                n_qubits, realization);
    for (Eigen::Index i = 0; i < a.a.size(); ++i)
        s += fmt::format("{},{},{}\n", i, format_double(a.a(i)), format_double(a.b(i)));
    return s;
}

inline void write_artifacts(const fs::path& dir, const Cell& c, const CellArtifacts& a, bool all_modes) {
    const std::string stem = cell_stem(c.n_qubits, c.gamma, c.realization);
    write_atomic(dir / (stem + "_fidelity.csv"), series_text(a.fidelity));
    write_atomic(dir / (stem + "_spread.csv"), series_text(a.spread));
    if (all_modes)
        for (const auto& s : a.spread_modes) write_atomic(dir / (stem + "_spread_" + s.meta.mode + ".csv"), series_text(s));
    write_atomic(dir / (stem + "_lanczos.csv"), lanczos_text(a, c.n_qubits, c.gamma, c.realization));
}

inline std::optional<ResultRow> load_cell(const fs::path& path, const ExperimentConfig& cfg, const Cell& c) {
    if (!fs::exists(path)) return std::nullopt;
    try {
        const CsvTable t = read_csv(path);
        if (t.rows.size() != 1) return std::nullopt;
        if (t.header != result_columns(cfg.emit_all_modes)) return std::nullopt;
        ResultRow r = parse_row(t, t.rows.front());
        if (r.n_qubits != c.n_qubits || r.gamma != c.gamma || r.realization != c.realization || !r.ok)
            return std::nullopt;
        if (r.seed != realization_hamiltonian(cfg, c.n_qubits, c.gamma, c.realization).seed) return std::nullopt;
        if (auto it = t.meta.find("wall_time_ms"); it != t.meta.end()) r.wall_time_ms = to_double(it->second);
        return r;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

inline std::string iso_now() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace detail

/// Runs every (n_qubits, gamma, realization) cell over a pool of workers
/// and writes the output directory. Rows are stored by cell index, so the
/// written files do not depend on the worker count or completion order.
inline SweepResult run_sweep(const ExperimentConfig& cfg, const SweepOptions& opts = {}) {
    cfg.validate();
    const fs::path out_dir(cfg.output_dir);
    const fs::path cells_dir = out_dir / "cells";
    const fs::path series_dir = out_dir / "series";
    fs::create_directories(cells_dir);
    const std::string started = detail::iso_now();

    const auto cells = enumerate_cells(cfg);
    std::vector<ResultRow> rows(cells.size());
    std::atomic<std::size_t> next{0};
    std::atomic<int> resumed{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;

    auto worker = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            const Cell& c = cells[i];
            const fs::path cell_file = cells_dir / (cell_stem(c.n_qubits, c.gamma, c.realization) + ".csv");
            try {
                if (opts.resume) {
                    auto done = detail::load_cell(cell_file, cfg, c);
                    const bool series_ok = !cfg.emit_full_series ||
                                           fs::exists(series_dir / (cell_stem(c.n_qubits, c.gamma, c.realization) +
                                                                    "_lanczos.csv"));
                    if (done && series_ok) {
                        rows[i] = *done;
                        ++resumed;
                        continue;
                    }
                }
                CellOutput o = run_single(cfg, c.n_qubits, c.gamma, c.realization, opts.hooks);
                if (o.artifacts) detail::write_artifacts(series_dir, c, *o.artifacts, cfg.emit_all_modes);
                write_atomic(cell_file, fmt::format("# wall_time_ms: {}\n{}\n{}\n", format_double(o.row.wall_time_ms),
                                                    detail::join(result_columns(cfg.emit_all_modes)),
                                                    format_row(o.row, cfg.emit_all_modes)));
                rows[i] = std::move(o.row);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };

    int workers = opts.workers > 0 ? opts.workers : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    workers = std::min<int>(workers, static_cast<int>(std::max<std::size_t>(cells.size(), 1)));
    {
        std::vector<std::jthread> pool;
        for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
        worker();
    }
    if (first_error) std::rethrow_exception(first_error);

    SweepResult res;
    res.rows = std::move(rows);
    res.failed = static_cast<int>(std::count_if(res.rows.begin(), res.rows.end(), [](const auto& r) { return !r.ok; }));
    res.summaries = summarize(cfg, res.rows);

    write_atomic(out_dir / "results.csv", format_results(cfg, res.rows));
    write_atomic(out_dir / "summary.csv", format_summary(cfg, res.summaries));
    write_atomic(out_dir / "config.txt", opts.config_text.value_or(serialize(cfg)));

    std::string timings = "gamma,n_qubits,realization,wall_time_ms\n";
    for (const auto& r : res.rows)
        timings += fmt::format("{},{},{},{}\n", format_double(r.gamma), r.n_qubits, r.realization,
                               format_double(r.wall_time_ms));
    write_atomic(out_dir / "timings.csv", timings);

    nlohmann::json manifest;
    manifest["tool"] = "scrambling";
    manifest["version"] = std::string(kVersion);
    manifest["eigen_version"] =
        fmt::format("{}.{}.{}", EIGEN_WORLD_VERSION, EIGEN_MAJOR_VERSION, EIGEN_MINOR_VERSION);
    manifest["compiler"] = __VERSION__;
    manifest["master_seed"] = cfg.master_seed;
    manifest["started_utc"] = started;
    manifest["finished_utc"] = detail::iso_now();
    manifest["cells"] = res.rows.size();
    manifest["failed_cells"] = res.failed;
    manifest["resumed_cells"] = resumed.load();
    manifest["workers"] = workers;
    write_atomic(out_dir / "manifest.json", manifest.dump(2) + "\n");

    if (cfg.json_mirror) {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& r : res.rows) {
            nlohmann::json o{{"gamma", r.gamma}, {"n_qubits", r.n_qubits}, {"realization", r.realization},
                             {"seed", r.seed},   {"status", r.ok ? "ok" : "failed"}, {"error", r.error}};
            if (r.ok) {
                o["F_A"] = r.F_A;
                o["F_A_timeavg"] = r.F_A_timeavg;
                o["C_A"] = r.C_A;
                o["C_A_timeavg"] = r.C_A_timeavg;
            }
            j.push_back(std::move(o));
        }
        write_atomic(out_dir / "results.json", j.dump(2) + "\n");
    }
    return res;
}

// ------------------------------------------------------------- validate ----

struct ValidationEntry {
    Eigen::Index dim = 0;
    std::string check;
    double value = 0.0;
    std::string threshold;
    bool passed = false;
};

struct ValidationReport {
    std::vector<ValidationEntry> entries;
    bool passed() const {
        return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.passed; });
    }
};

struct ValidateOptions {
    Seed seed = 1;
    int gap_realizations = 10;
    Eigen::Index gap_min_dim = 32;
    PipelineHooks hooks;
};

/// Invariant suite per dimension (a power of two): Krylov orthonormality,
/// T-spectrum match, recursion residual, unitarity, F(0) = 1 and, from
/// gap_min_dim up, the chaotic/localized gap-ratio check.
inline ValidationReport run_validate(const std::vector<Eigen::Index>& dims, const ValidateOptions& opts = {}) {
    ValidationReport rep;
    for (const auto d : dims) {
        auto add = [&](std::string check, double value, std::string thr, bool ok) {
            rep.entries.push_back({d, std::move(check), value, std::move(thr), ok});
        };
        if (d < 2 || (d & (d - 1)) != 0) {
            add("dimension is 2^N", static_cast<double>(d), "power of two >= 2", false);
            continue;
        }
        const int n = static_cast<int>(std::lround(std::log2(static_cast<double>(d))));
        try {
            const RpHamiltonian h = build_rp(n, 0.1, derive_seed(opts.seed, {static_cast<std::uint64_t>(d)}),
                                             {std::max(12, n), ScalingConvention::HilbertDimension});
            const SpectralDecomposition sd = diagonalize(h);
            const StateVector psi0 = ghz_state(QubitCount(n));
            LanczosOptions lo;
            lo.reorthogonalize = opts.hooks.reorthogonalize;
            const LanczosResult lr = lanczos(h.matrix, psi0, lo);
            const BasisValidation v = validate_basis(lr.basis, h.matrix, sd.eigenvalues);
            add("krylov orthonormality", v.orthonormality_defect, "< 1e-8", v.orthonormal());
            add("T spectrum match", v.spectrum_defect.value_or(0.0), "< 1e-6 (k = D)", v.spectrum_ok());
            add("lanczos recursion residual", v.recursion_defect, "< 1e-7", v.recursion_ok());

            const ComplexMatrix u = propagator(sd, 1.0);
            const double unit = (u * u.adjoint() - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
            add("unitarity |UU^+ - I|", unit, "< 1e-10", unit < 1e-10);

            const double f0 = std::norm(overlap(psi0, evolve(sd, psi0, 0.0)));
            add("F(0) = 1", std::abs(f0 - 1.0), "< 1e-12", std::abs(f0 - 1.0) < 1e-12);

            if (d >= opts.gap_min_dim) {
                double r_chaos = 0.0, r_loc = 0.0;
                for (int r = 0; r < opts.gap_realizations; ++r) {
                    const Seed s = derive_seed(opts.seed, {static_cast<std::uint64_t>(d), static_cast<std::uint64_t>(r), 7});
                    r_chaos += gap_ratio(diagonalize(build_rp(n, 0.1, s)).eigenvalues);
                    r_loc += gap_ratio(diagonalize(build_rp(n, 5.0, s)).eigenvalues);
                }
                r_chaos /= opts.gap_realizations;
                r_loc /= opts.gap_realizations;
                add("gap ratio <r> at gamma=0.1", r_chaos, "in [0.48, 0.58]", r_chaos >= 0.48 && r_chaos <= 0.58);
                add("gap ratio <r> at gamma=5.0", r_loc, "in [0.33, 0.44]", r_loc >= 0.33 && r_loc <= 0.44);
            }
        } catch (const Error& e) {
            add(std::string("pipeline error: ") + e.code(), 0.0, "no error", false);
        }
    }
    return rep;
}

inline std::string format_report(const ValidationReport& rep) {
    std::string s = fmt::format("{:>6}  {:<30}  {:>12}  {:<20}  {}\n", "D", "check", "value", "threshold", "result");
    for (const auto& e : rep.entries)
        s += fmt::format("{:>6}  {:<30}  {:>12.4g}  {:<20}  {}\n", e.dim, e.check, e.value, e.threshold,
                         e.passed ? "PASS" : "FAIL");
    return s;
}

// ------------------------------------------------------------ plot data ----

/// Writes per-figure CSVs from a sweep directory (or its results.csv):
///   fig1_fidelity.csv      gamma,n_qubits,mean,ci_low,ci_high
///   fig2_spread.csv        gamma,n_qubits,mean,ci_low,ci_high
///   fig3_early_spread.csv  gamma,n_qubits,realization,tau,C
///   fig4_bn.csv            n,b_n,gamma,n_qubits,realization
/// fig3 uses the grid point closest to gamma = 0.1. fig3/fig4 need the
/// per-cell series written with output.emit_full_series = true.
inline std::vector<fs::path> emit_plot_data(const fs::path& results, const fs::path& out_dir) {
    const fs::path dir = fs::is_directory(results) ? results : results.parent_path();
    const fs::path results_csv = fs::is_directory(results) ? dir / "results.csv" : results;
    const CsvTable res = read_csv(results_csv);
    if (res.rows.empty()) throw PreconditionError("plot-data: results table is empty");
    const CsvTable sum = read_csv(dir / "summary.csv");
    fs::create_directories(out_dir);
    std::vector<fs::path> written;

    for (auto [obs, name] : {std::pair{"F_A", "fig1_fidelity.csv"}, std::pair{"C_A", "fig2_spread.csv"}}) {
        std::string s = fmt::format("# observable: {}\ngamma,n_qubits,mean,ci_low,ci_high\n", obs);
        for (const auto& r : sum.rows) {
            if (r.at(sum.column("observable")) != obs) continue;
            s += fmt::format("{},{},{},{},{}\n", r.at(sum.column("gamma")), r.at(sum.column("n_qubits")),
                             r.at(sum.column("mean")), r.at(sum.column("ci_low")), r.at(sum.column("ci_high")));
        }
        write_atomic(out_dir / name, s);
        written.push_back(out_dir / name);
    }

    const auto flag = res.meta.find("emit_full_series");
    if (flag == res.meta.end() || flag->second != "true")
        throw PreconditionError("plot-data: fig3/fig4 need per-cell series; rerun the sweep with "
                                "output.emit_full_series = true");

    std::vector<ResultRow> rows;
    for (const auto& f : res.rows) {
        ResultRow r = parse_row(res, f);
        if (r.ok) rows.push_back(r);
    }
    if (rows.empty()) throw PreconditionError("plot-data: no successful cells");
    const double early_gamma =
        std::min_element(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
            return std::abs(a.gamma - 0.1) < std::abs(b.gamma - 0.1);
        })->gamma;

    const fs::path series = dir / "series";
    auto need = [](const fs::path& p) {
        if (!fs::exists(p))
            throw PreconditionError("plot-data: missing series artifact " + p.string() +
                                    " (was output.emit_full_series enabled?)");
        return read_csv(p);
    };

    std::string fig3 = "gamma,n_qubits,realization,tau,C\n";
    std::string fig4 = "n,b_n,gamma,n_qubits,realization\n";
    for (const auto& r : rows) {
        const std::string stem = cell_stem(r.n_qubits, r.gamma, r.realization);
        const std::string g = format_double(r.gamma);
        if (r.gamma == early_gamma) {
            const CsvTable t = need(series / (stem + "_spread.csv"));
            for (const auto& f : t.rows)
                fig3 += fmt::format("{},{},{},{},{}\n", g, r.n_qubits, r.realization, f.at(0), f.at(1));
        }
        const CsvTable l = need(series / (stem + "_lanczos.csv"));
        for (const auto& f : l.rows)
            fig4 += fmt::format("{},{},{},{},{}\n", f.at(l.column("n")), f.at(l.column("b_n")), g, r.n_qubits,
                                r.realization);
    }
    write_atomic(out_dir / "fig3_early_spread.csv", fig3);
    write_atomic(out_dir / "fig4_bn.csv", fig4);
    written.push_back(out_dir / "fig3_early_spread.csv");
    written.push_back(out_dir / "fig4_bn.csv");
    return written;
}

} // namespace scrambling
