// ensembles.hpp - GOE sampling, Rosenzweig-Porter Hamiltonians and the
// perturbed/fresh-draw ensembles used for bootstrapping.

#pragma once

#include "scrambling/core.hpp"
#include "scrambling/rng.hpp"

#include <cmath>
#include <string>
#include <string_view>
#include <vector>

namespace scrambling {

enum class Regime { Chaotic, Fractal, Localized };

enum class EnsembleMode { FreshDraw, PerturbedOperator };

// Which "N" sets the GOE weight N^{-gamma/2}.
enum class ScalingConvention { HilbertDimension, QubitCount };

inline std::string_view to_string(Regime r) {
    switch (r) {
    case Regime::Chaotic: return "chaotic";
    case Regime::Fractal: return "fractal";
    case Regime::Localized: return "localized";
    }
    return "?";
}

inline std::string_view to_string(EnsembleMode m) {
    return m == EnsembleMode::FreshDraw ? "fresh_draw" : "perturbed_operator";
}

inline EnsembleMode parse_ensemble_mode(std::string_view s) {
    if (s == "fresh_draw") return EnsembleMode::FreshDraw;
    if (s == "perturbed_operator") return EnsembleMode::PerturbedOperator;
    throw ConfigError("unknown ensemble mode '" + std::string(s) + "'");
}

inline std::string_view to_string(ScalingConvention c) {
    return c == ScalingConvention::HilbertDimension ? "dimension" : "qubits";
}

inline ScalingConvention parse_scaling(std::string_view s) {
    if (s == "dimension") return ScalingConvention::HilbertDimension;
    if (s == "qubits") return ScalingConvention::QubitCount;
    throw ConfigError("unknown scaling convention '" + std::string(s) + "'");
}

// gamma = 1 is labelled Fractal and gamma = 2 Localized.
inline Regime regime_for(double gamma) {
    if (gamma < 1.0) return Regime::Chaotic;
    if (gamma < 2.0) return Regime::Fractal;
    return Regime::Localized;
}

class GoeMatrix {
public:
    explicit GoeMatrix(RealMatrix m) : m_(std::move(m)) {}

    Eigen::Index dim() const { return m_.rows(); }
    const RealMatrix& matrix() const { return m_; }
    double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

private:
    RealMatrix m_;
};

/// Symmetrised Gaussian matrix (G + G^T)/2 with i.i.d. standard-normal G.
/// Diagonal variance 1, off-diagonal variance 1/2. Every entry of G is drawn
/// in column-major order from one engine, so (dim, seed) fixes the result.
inline GoeMatrix sample_goe(Eigen::Index dim, Seed seed) {
    if (dim < 1) throw InvalidDimension("sample_goe: dimension must be >= 1, got " + std::to_string(dim));
    Engine eng = make_engine(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    RealMatrix g(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j)
        for (Eigen::Index i = 0; i < dim; ++i) g(i, j) = normal(eng);

    RealMatrix m(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
        m(j, j) = g(j, j);
        for (Eigen::Index i = j + 1; i < dim; ++i) {
            const double v = 0.5 * (g(i, j) + g(j, i));
            m(i, j) = v;
            m(j, i) = v;
        }
    }
    return GoeMatrix(std::move(m));
}

struct RpOptions {
    int max_qubits = 12;
    ScalingConvention scaling = ScalingConvention::HilbertDimension;
};

// A dense real-symmetric Hamiltonian together with where it came from.
struct RpHamiltonian {
    int n_qubits = 0;
    double gamma = 0.0;
    Seed seed = 0;
    Regime regime = Regime::Chaotic;
    EnsembleMode origin = EnsembleMode::FreshDraw;
    RealMatrix matrix;

    Eigen::Index dim() const { return matrix.rows(); }
};

inline double goe_weight(int n_qubits, double gamma, ScalingConvention scaling) {
    const double n = scaling == ScalingConvention::HilbertDimension
                         ? std::ldexp(1.0, n_qubits)
                         : static_cast<double>(n_qubits);
    return std::pow(n, -0.5 * gamma);
}

/// H_rp = H_0 + N^{-gamma/2} H_goe with diag(H_0) ~ N(0, 1). Off-diagonal
/// entries come only from the GOE term.
inline RpHamiltonian build_rp(int n_qubits, double gamma, Seed seed, const RpOptions& opts = {}) {
    if (n_qubits < 1 || n_qubits > opts.max_qubits)
        throw InvalidDimension("build_rp: n_qubits must be in [1, " + std::to_string(opts.max_qubits) +
                               "], got " + std::to_string(n_qubits));
    if (!(gamma >= 0.0) || !std::isfinite(gamma))
        throw PreconditionError("build_rp: gamma must be finite and >= 0");

    const Eigen::Index dim = Eigen::Index{1} << n_qubits;
    const double weight = goe_weight(n_qubits, gamma, opts.scaling);

    RpHamiltonian h;
    h.n_qubits = n_qubits;
    h.gamma = gamma;
    h.seed = seed;
    h.regime = regime_for(gamma);
    h.origin = EnsembleMode::FreshDraw;
    h.matrix = weight * sample_goe(dim, derive_seed(seed, {1})).matrix();

    Engine eng = make_engine(derive_seed(seed, {0}));
    std::normal_distribution<double> normal(0.0, 1.0);
    for (Eigen::Index i = 0; i < dim; ++i) h.matrix(i, i) += normal(eng);
    return h;
}

struct PerturbationSpec {
    double epsilon = 1e-3;
    int count = 20;
    EnsembleMode mode = EnsembleMode::FreshDraw;

    void validate() const {
        if (!(epsilon > 0.0) || !std::isfinite(epsilon))
            throw PreconditionError("PerturbationSpec: epsilon must be > 0");
        if (count < 1) throw PreconditionError("PerturbationSpec: count must be >= 1");
    }
};

// Member i of the ensemble around `base`; see build_ensemble.
inline RpHamiltonian ensemble_member(const RpHamiltonian& base, const PerturbationSpec& spec, Seed seed, int i,
                                     const RpOptions& opts = {}) {
    const Seed member_seed = derive_seed(seed, {static_cast<std::uint64_t>(i)});
    if (spec.mode == EnsembleMode::FreshDraw) return build_rp(base.n_qubits, base.gamma, member_seed, opts);

    const GoeMatrix p = sample_goe(base.dim(), member_seed);
    const double scale = spec.epsilon * base.matrix.norm() / p.matrix().norm();
    RpHamiltonian m = base;
    m.seed = member_seed;
    m.origin = EnsembleMode::PerturbedOperator;
    m.matrix += scale * p.matrix();
    return m;
}

/// M members derived from `base`. PerturbedOperator adds a GOE perturbation
/// rescaled so that ||member - base||_F = epsilon * ||base||_F; FreshDraw
/// redraws the whole RP Hamiltonian at the base's (n_qubits, gamma).
inline std::vector<RpHamiltonian> build_ensemble(const RpHamiltonian& base, const PerturbationSpec& spec,
                                                 Seed seed, const RpOptions& opts = {}) {
    spec.validate();
    std::vector<RpHamiltonian> members;
    members.reserve(static_cast<std::size_t>(spec.count));
    for (int i = 0; i < spec.count; ++i) members.push_back(ensemble_member(base, spec, seed, i, opts));
    return members;
}

inline double max_asymmetry(const RealMatrix& m) {
    return (m - m.transpose()).cwiseAbs().maxCoeff();
}

} // namespace scrambling
