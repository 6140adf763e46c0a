// spectral.hpp - exact diagonalization and unitary evolution through the
// eigendecomposition U(t) = V diag(exp(-i E_n t)) V^T (hbar = 1).

#pragma once

#include "scrambling/core.hpp"
#include "scrambling/ensembles.hpp"
#include "scrambling/states.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace scrambling {

struct SpectralDecomposition {
    RealVector eigenvalues;   // ascending
    RealMatrix eigenvectors;  // column n <-> eigenvalues(n)

    Eigen::Index dim() const { return eigenvalues.size(); }
};

enum class AsymmetryPolicy { Reject, Symmetrize };

struct DiagonalizeOptions {
    AsymmetryPolicy asymmetry = AsymmetryPolicy::Reject;
    double asymmetry_tol = 1e-12;
    Eigen::Index max_dim = Eigen::Index{1} << 12;
};

namespace detail {

inline std::string context(Eigen::Index dim, double gamma) {
    std::ostringstream os;
    os << "(D=" << dim << ", gamma=" << gamma << ")";
    return os.str();
}

// Largest-magnitude component of each column made positive.
inline void fix_column_signs(RealMatrix& v) {
    for (Eigen::Index c = 0; c < v.cols(); ++c) {
        Eigen::Index arg = 0;
        v.col(c).cwiseAbs().maxCoeff(&arg);
        if (v(arg, c) < 0.0) v.col(c) *= -1.0;
    }
}

} // namespace detail

inline SpectralDecomposition diagonalize(const RealMatrix& h, const DiagonalizeOptions& opts = {},
                                         double gamma_context = std::nan("")) {
    if (h.rows() != h.cols()) throw ShapeError("diagonalize: matrix is not square");
    if (h.rows() < 1) throw InvalidDimension("diagonalize: empty matrix");
    if (h.rows() > opts.max_dim)
        throw InvalidDimension("diagonalize: dimension " + std::to_string(h.rows()) + " exceeds cap");

    const double asym = max_asymmetry(h);
    RealMatrix work;
    const RealMatrix* src = &h;
    if (asym > opts.asymmetry_tol) {
        if (opts.asymmetry == AsymmetryPolicy::Reject)
            throw PreconditionError("diagonalize: input not symmetric (max asymmetry " + std::to_string(asym) + ")");
        work = 0.5 * (h + h.transpose());
        src = &work;
    }

    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(*src, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success)
        throw NumericalFailure("diagonalize: eigensolver did not converge " + detail::context(h.rows(), gamma_context));

    SpectralDecomposition sd{solver.eigenvalues(), solver.eigenvectors()};
    if (!sd.eigenvalues.allFinite() || !sd.eigenvectors.allFinite())
        throw NumericalFailure("diagonalize: non-finite eigensystem " + detail::context(h.rows(), gamma_context));
    detail::fix_column_signs(sd.eigenvectors);
    return sd;
}

inline SpectralDecomposition diagonalize(const RpHamiltonian& h, const DiagonalizeOptions& opts = {}) {
    return diagonalize(h.matrix, opts, h.gamma);
}

inline ComplexVector phases(const RealVector& energies, double t) {
    ComplexVector p(energies.size());
    for (Eigen::Index n = 0; n < energies.size(); ++n) p(n) = std::polar(1.0, -energies(n) * t);
    return p;
}

// Evolution of one fixed initial state; W = V^T psi0 is computed once.
class Evolver {
public:
    Evolver(const SpectralDecomposition& sd, const StateVector& psi0) : sd_(&sd) {
        if (psi0.dim() != sd.dim())
            throw ShapeError("evolve: state dimension " + std::to_string(psi0.dim()) +
                             " does not match Hamiltonian dimension " + std::to_string(sd.dim()));
        weights_ = sd.eigenvectors.transpose().cast<Complex>() * psi0.amplitudes();
    }
    Evolver(SpectralDecomposition&&, const StateVector&) = delete;

    // Expansion coefficients c_n = <psi_n|psi0>.
    const ComplexVector& eigen_weights() const { return weights_; }

    StateVector at(double t) const {
        const ComplexVector rotated = phases(sd_->eigenvalues, t).cwiseProduct(weights_);
        ComplexVector out(sd_->dim());
        out.real() = sd_->eigenvectors * rotated.real();
        out.imag() = sd_->eigenvectors * rotated.imag();
        return StateVector(std::move(out));
    }

private:
    const SpectralDecomposition* sd_;
    ComplexVector weights_;
};

inline StateVector evolve(const SpectralDecomposition& sd, const StateVector& psi0, double t) {
    return Evolver(sd, psi0).at(t);
}

inline ComplexMatrix propagator(const SpectralDecomposition& sd, double t) {
    const ComplexMatrix v = sd.eigenvectors.cast<Complex>();
    return v * phases(sd.eigenvalues, t).asDiagonal() * v.adjoint();
}

inline double expectation(const RealMatrix& h, const StateVector& psi) {
    const ComplexVector hpsi = h.cast<Complex>() * psi.amplitudes();
    return psi.amplitudes().dot(hpsi).real();
}

/// Mean consecutive-gap ratio <r>. A zero gap pair contributes r_n = 0.
inline double gap_ratio(const RealVector& eigenvalues) {
    const Eigen::Index d = eigenvalues.size();
    if (d < 3) throw PreconditionError("gap_ratio: need at least 3 levels");
    double sum = 0.0;
    for (Eigen::Index n = 0; n + 2 < d; ++n) {
        const double g0 = eigenvalues(n + 1) - eigenvalues(n);
        const double g1 = eigenvalues(n + 2) - eigenvalues(n + 1);
        const double hi = std::max(g0, g1);
        sum += hi > 0.0 ? std::min(g0, g1) / hi : 0.0;
    }
    return sum / static_cast<double>(d - 2);
}

inline double gap_ratio(const SpectralDecomposition& sd) { return gap_ratio(sd.eigenvalues); }

} // namespace scrambling
