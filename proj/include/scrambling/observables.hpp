// observables.hpp - fidelity and spread-complexity time series on uniform
// grids, and their time integrals.

#pragma once

#include "scrambling/core.hpp"
#include "scrambling/krylov.hpp"
#include "scrambling/spectral.hpp"
#include "scrambling/states.hpp"

#include <cmath>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

namespace scrambling {

// Samples tau_j = j * dt for j = 1..steps; tau = 0 is not part of the grid.
struct TimeGrid {
    double dt = 1e-2;
    int steps = 2000;

    void validate() const {
        if (!(dt > 0.0) || !std::isfinite(dt)) throw PreconditionError("TimeGrid: dt must be > 0");
        if (steps < 1) throw PreconditionError("TimeGrid: steps must be >= 1");
    }
    double tau(int j) const { return dt * static_cast<double>(j); }
    double horizon() const { return dt * static_cast<double>(steps); }

    static TimeGrid fidelity_default() { return {1e-2, 2000}; }
    static TimeGrid spread_default() { return {100.0, 50}; }
};

enum class Observable { Fidelity, SpreadComplexity };

inline std::string_view to_string(Observable o) {
    return o == Observable::Fidelity ? "fidelity" : "spread_complexity";
}

struct SeriesMetadata {
    double gamma = std::nan("");
    int n_qubits = 0;
    int realization = -1;
    std::string mode;
};

struct TimeSeries {
    TimeGrid grid;
    std::vector<double> values;  // values[j-1] is the sample at tau_j
    Observable observable = Observable::Fidelity;
    SeriesMetadata meta;
};

enum class IntegrationMethod { LeftRiemann, Trapezoid };

struct IntegratedValue {
    double value = 0.0;
    IntegrationMethod method = IntegrationMethod::LeftRiemann;
};

inline constexpr double kFidelityOriginTol = 1e-12;
inline constexpr double kFidelityBoundTol = 1e-10;

/// F(tau_j) = |<psi0|psi(tau_j)>|^2. Throws if F(0) != 1 or any sample
/// leaves [0, 1 + 1e-10].
inline TimeSeries fidelity_series(const SpectralDecomposition& sd, const StateVector& psi0, const TimeGrid& grid) {
    grid.validate();
    if (!psi0.is_normalized()) throw PreconditionError("fidelity_series: initial state is not unit norm");
    const Evolver evolver(sd, psi0);

    const double f0 = std::norm(overlap(psi0, evolver.at(0.0)));
    if (std::abs(f0 - 1.0) > kFidelityOriginTol)
        throw NumericalFailure(fmt::format("fidelity_series: F(0) = {:.17g} differs from 1", f0));

    TimeSeries s{grid, {}, Observable::Fidelity, {}};
    s.values.reserve(static_cast<std::size_t>(grid.steps));
    for (int j = 1; j <= grid.steps; ++j) {
        const double f = std::norm(overlap(psi0, evolver.at(grid.tau(j))));
        if (!std::isfinite(f) || f < 0.0 || f > 1.0 + kFidelityBoundTol)
            throw NumericalFailure(fmt::format("fidelity_series: F({}) = {} out of bounds", grid.tau(j), f));
        s.values.push_back(f);
    }
    return s;
}

/// C(tau_j) for a Krylov basis built once from (H, psi0); only the state is
/// evolved per time point.
inline TimeSeries spread_series(const KrylovBasis& basis, const SpectralDecomposition& sd, const StateVector& psi0,
                                const TimeGrid& grid, ComplexityMode mode) {
    grid.validate();
    if (basis.size() == 0) throw PreconditionError("spread_series: empty basis");
    if (basis.dim() != sd.dim() || psi0.dim() != sd.dim()) throw ShapeError("spread_series: dimension mismatch");
    const Evolver evolver(sd, psi0);
    TimeSeries s{grid, {}, Observable::SpreadComplexity, {}};
    s.meta.mode = std::string(to_string(mode));
    s.values.reserve(static_cast<std::size_t>(grid.steps));
    for (int j = 1; j <= grid.steps; ++j) s.values.push_back(spread_complexity(basis, evolver.at(grid.tau(j)), mode));
    return s;
}

// One evolution per time point, every complexity mode read off the same
// Krylov coefficients.
inline std::vector<TimeSeries> spread_series_all_modes(const KrylovBasis& basis, const SpectralDecomposition& sd,
                                                       const StateVector& psi0, const TimeGrid& grid) {
    grid.validate();
    if (basis.dim() != sd.dim() || psi0.dim() != sd.dim()) throw ShapeError("spread_series: dimension mismatch");
    const Evolver evolver(sd, psi0);
    std::vector<TimeSeries> out;
    for (auto m : kAllComplexityModes) {
        TimeSeries s{grid, {}, Observable::SpreadComplexity, {}};
        s.meta.mode = std::string(to_string(m));
        s.values.reserve(static_cast<std::size_t>(grid.steps));
        out.push_back(std::move(s));
    }
    for (int j = 1; j <= grid.steps; ++j) {
        const ComplexVector c = krylov_coefficients(basis, evolver.at(grid.tau(j)));
        for (std::size_t m = 0; m < out.size(); ++m)
            out[m].values.push_back(spread_complexity_from_coefficients(c, kAllComplexityModes[m]));
    }
    return out;
}

/// LeftRiemann: dt * sum_j v_j over tau_1..tau_steps. Trapezoid over the
/// same samples drops half of the first and last sample.
inline IntegratedValue integrate(const TimeSeries& series, IntegrationMethod method = IntegrationMethod::LeftRiemann) {
    if (series.values.empty()) throw PreconditionError("integrate: empty series");
    double sum = 0.0;
    for (double v : series.values) sum += v;
    if (method == IntegrationMethod::Trapezoid) sum -= 0.5 * (series.values.front() + series.values.back());
    return {series.grid.dt * sum, method};
}

// Integral divided by the horizon, i.e. the mean sample value.
inline double time_average(const TimeSeries& series) {
    if (series.values.empty()) throw PreconditionError("time_average: empty series");
    return integrate(series).value / series.grid.horizon();
}

inline void write_series_csv(std::ostream& os, const TimeSeries& s) {
    os << "# observable: " << to_string(s.observable) << '\n';
    os << "# gamma: " << fmt::format("{:.17g}", s.meta.gamma) << '\n';
    os << "# n_qubits: " << s.meta.n_qubits << '\n';
    os << "# realization: " << s.meta.realization << '\n';
    if (!s.meta.mode.empty()) os << "# mode: " << s.meta.mode << '\n';
    os << "# dt: " << fmt::format("{:.17g}", s.grid.dt) << '\n';
    os << "# steps: " << s.grid.steps << '\n';
    os << "tau,value\n";
    for (std::size_t j = 0; j < s.values.size(); ++j)
        os << fmt::format("{:.17g},{:.17g}\n", s.grid.tau(static_cast<int>(j + 1)), s.values[j]);
}

} // namespace scrambling
