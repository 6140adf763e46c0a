// krylov.hpp - Lanczos tridiagonalization from a seed state, the Krylov
// basis it spans, and spread-complexity functionals on that basis.

#pragma once

#include "scrambling/core.hpp"
#include "scrambling/states.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

namespace scrambling {

struct KrylovBasis {
    ComplexMatrix vectors;  // D x k, column n is |K_n>
    RealVector a;           // a_n, length k
    RealVector b;           // b_n, length k, b(0) == 0

    Eigen::Index dim() const { return vectors.rows(); }
    Eigen::Index size() const { return vectors.cols(); }
};

class TridiagonalT {
public:
    TridiagonalT(RealVector diagonal, RealVector off_diagonal)
        : diag_(std::move(diagonal)), off_(std::move(off_diagonal)) {
        if (diag_.size() < 1 || off_.size() != diag_.size() - 1)
            throw ShapeError("TridiagonalT: off-diagonal must have length k - 1");
    }

    static TridiagonalT from_basis(const KrylovBasis& basis) {
        const Eigen::Index k = basis.size();
        return TridiagonalT(basis.a, basis.b.tail(k - 1));
    }

    Eigen::Index size() const { return diag_.size(); }
    const RealVector& diagonal() const { return diag_; }
    const RealVector& off_diagonal() const { return off_; }

    RealMatrix dense() const {
        const Eigen::Index k = size();
        RealMatrix t = RealMatrix::Zero(k, k);
        t.diagonal() = diag_;
        if (k > 1) {
            t.diagonal(1) = off_;
            t.diagonal(-1) = off_;
        }
        return t;
    }

    RealVector eigenvalues() const {
        if (size() == 1) return diag_;
        Eigen::SelfAdjointEigenSolver<RealMatrix> solver;
        solver.computeFromTridiagonal(diag_, off_, Eigen::EigenvaluesOnly);
        if (solver.info() != Eigen::Success) throw NumericalFailure("TridiagonalT: eigenvalues did not converge");
        return solver.eigenvalues();
    }

private:
    RealVector diag_;
    RealVector off_;
};

struct LanczosOptions {
    Eigen::Index max_k = 0;          // 0 means the full dimension D
    double tol_breakdown = 1e-12;    // absolute, on the candidate norm
    double seed_norm_tol = 1e-10;
    double imag_tol = 1e-10;
    bool reorthogonalize = true;     // test hook only; production paths never turn it off
};

struct LanczosResult {
    KrylovBasis basis;
    TridiagonalT t;
    bool breakdown = false;
};

/// Three-term Lanczos recursion
///   |A_{n+1}> = (H - a_n)|K_n> - b_n |K_{n-1}>,  b_{n+1} = || A_{n+1} ||,
///   |K_{n+1}> = |A_{n+1}> / b_{n+1},            a_{n+1} = <K_{n+1}|H|K_{n+1}>,
/// with two passes of classical Gram-Schmidt against every earlier vector
/// before each normalisation. Stops early when the candidate norm drops
/// below tol_breakdown (the seed generates an invariant subspace).
inline LanczosResult lanczos(const RealMatrix& h, const StateVector& seed, const LanczosOptions& opts = {}) {
    const Eigen::Index d = h.rows();
    if (h.cols() != d) throw ShapeError("lanczos: Hamiltonian is not square");
    if (seed.dim() != d) throw ShapeError("lanczos: seed dimension does not match Hamiltonian");
    if (!seed.is_normalized(opts.seed_norm_tol)) throw PreconditionError("lanczos: seed state is not unit norm");
    const Eigen::Index max_k = opts.max_k == 0 ? d : opts.max_k;
    if (max_k < 1 || max_k > d) throw PreconditionError("lanczos: max_k must lie in [1, D]");

    const ComplexMatrix hc = h.cast<Complex>();
    ComplexMatrix q(d, max_k);
    RealVector a(max_k), b(max_k);
    b(0) = 0.0;

    auto rayleigh = [&](const ComplexVector& hk, Eigen::Index n) {
        const Complex val = q.col(n).dot(hk);
        if (!std::isfinite(val.real()) || !std::isfinite(val.imag()))
            throw NumericalFailure("lanczos: NaN in a_" + std::to_string(n));
        if (std::abs(val.imag()) > opts.imag_tol * std::max(1.0, std::abs(val.real())))
            throw NumericalFailure("lanczos: complex a_" + std::to_string(n) + " for a Hermitian H");
        return val.real();
    };

    q.col(0) = seed.amplitudes();
    ComplexVector hk = hc * q.col(0);
    a(0) = rayleigh(hk, 0);

    Eigen::Index k = 1;
    bool breakdown = false;
    while (k < max_k) {
        const Eigen::Index n = k - 1;
        ComplexVector w = hk - a(n) * q.col(n);
        if (n > 0) w -= b(n) * q.col(n - 1);
        if (opts.reorthogonalize) {
            for (int pass = 0; pass < 2; ++pass) {
                const ComplexVector proj = q.leftCols(k).adjoint() * w;
                w.noalias() -= q.leftCols(k) * proj;
            }
        }
        const double beta = w.norm();
        if (!std::isfinite(beta)) throw NumericalFailure("lanczos: NaN in b_" + std::to_string(k));
        if (beta < opts.tol_breakdown) {
            breakdown = true;
            break;
        }
        b(k) = beta;
        q.col(k) = w / beta;
        hk = hc * q.col(k);
        a(k) = rayleigh(hk, k);
        ++k;
    }

    KrylovBasis basis{q.leftCols(k), a.head(k), b.head(k)};
    TridiagonalT t = TridiagonalT::from_basis(basis);
    return {std::move(basis), std::move(t), breakdown};
}

enum class ComplexityMode { MeanModulus, MeanReal, CoherentSum, PositionWeighted };

inline constexpr ComplexityMode kAllComplexityModes[] = {
    ComplexityMode::MeanModulus, ComplexityMode::MeanReal, ComplexityMode::CoherentSum,
    ComplexityMode::PositionWeighted};

inline std::string_view to_string(ComplexityMode m) {
    switch (m) {
    case ComplexityMode::MeanModulus: return "mean_modulus";
    case ComplexityMode::MeanReal: return "mean_real";
    case ComplexityMode::CoherentSum: return "coherent_sum";
    case ComplexityMode::PositionWeighted: return "position_weighted";
    }
    return "?";
}

inline ComplexityMode parse_complexity_mode(std::string_view s) {
    for (auto m : kAllComplexityModes)
        if (to_string(m) == s) return m;
    throw ConfigError("unknown complexity mode '" + std::string(s) + "'");
}

// c_i = <K_i|psi>
inline ComplexVector krylov_coefficients(const KrylovBasis& basis, const StateVector& psi) {
    if (psi.dim() != basis.dim()) throw PreconditionError("krylov_coefficients: dimension mismatch");
    return basis.vectors.adjoint() * psi.amplitudes();
}

inline double spread_complexity_from_coefficients(const ComplexVector& c, ComplexityMode mode) {
    const auto k = static_cast<double>(c.size());
    if (c.size() == 0) throw PreconditionError("spread_complexity: empty basis");
    switch (mode) {
    case ComplexityMode::MeanModulus: return c.cwiseAbs().sum() / k;
    case ComplexityMode::MeanReal: return c.real().sum() / k;
    case ComplexityMode::CoherentSum: return std::abs(c.sum()) / k;
    case ComplexityMode::PositionWeighted: {
        if (c.size() == 1) return 0.0;
        double s = 0.0;
        for (Eigen::Index i = 0; i < c.size(); ++i) s += static_cast<double>(i) * std::norm(c(i));
        return s / (k - 1.0);
    }
    }
    throw PreconditionError("spread_complexity: unknown mode");
}

inline double spread_complexity(const KrylovBasis& basis, const StateVector& psi, ComplexityMode mode) {
    return spread_complexity_from_coefficients(krylov_coefficients(basis, psi), mode);
}

struct BasisValidation {
    double orthonormality_defect = 0.0;
    std::optional<double> spectrum_defect;  // only when k == D
    double recursion_defect = 0.0;

    double orthonormality_tol = 1e-8;
    double spectrum_tol = 1e-6;
    double recursion_tol = 1e-7;

    bool orthonormal() const { return orthonormality_defect < orthonormality_tol; }
    bool spectrum_ok() const { return !spectrum_defect || *spectrum_defect < spectrum_tol; }
    bool recursion_ok() const { return recursion_defect < recursion_tol; }
    bool passed() const { return orthonormal() && spectrum_ok() && recursion_ok(); }
};

inline double max_sorted_difference(RealVector x, RealVector y) {
    if (x.size() != y.size()) return std::numeric_limits<double>::infinity();
    std::sort(x.data(), x.data() + x.size());
    std::sort(y.data(), y.data() + y.size());
    return (x - y).cwiseAbs().maxCoeff();
}

/// Orthonormality, spectrum match (at k == D, given H's eigenvalues when
/// already known) and the largest three-term recursion residual over
/// n = 0..k-2.
inline BasisValidation validate_basis(const KrylovBasis& basis, const RealMatrix& h,
                                      const std::optional<RealVector>& h_eigenvalues = std::nullopt) {
    BasisValidation v;
    const Eigen::Index k = basis.size();
    const ComplexMatrix gram = basis.vectors.adjoint() * basis.vectors;
    v.orthonormality_defect = (gram - ComplexMatrix::Identity(k, k)).cwiseAbs().maxCoeff();

    if (k == h.rows()) {
        RealVector eh = h_eigenvalues ? *h_eigenvalues
                                      : RealVector(Eigen::SelfAdjointEigenSolver<RealMatrix>(h, Eigen::EigenvaluesOnly).eigenvalues());
        v.spectrum_defect = max_sorted_difference(TridiagonalT::from_basis(basis).eigenvalues(), eh);
    }

    const ComplexMatrix hc = h.cast<Complex>();
    for (Eigen::Index n = 0; n + 1 < k; ++n) {
        ComplexVector r = hc * basis.vectors.col(n) - basis.a(n) * basis.vectors.col(n) -
                          basis.b(n + 1) * basis.vectors.col(n + 1);
        if (n > 0) r -= basis.b(n) * basis.vectors.col(n - 1);
        v.recursion_defect = std::max(v.recursion_defect, r.norm());
    }
    return v;
}

} // namespace scrambling
