// states.hpp - state vectors, the GHZ initial state and inner products.
//
// Basis-index convention: qubit 0 is the most significant bit of the
// computational-basis index, so |q0 q1 ... q_{N-1}> sits at index
// sum_k q_k 2^{N-1-k}.

#pragma once

#include "scrambling/core.hpp"

#include <cmath>
#include <string>

namespace scrambling {

class StateVector {
public:
    StateVector() = default;
    explicit StateVector(ComplexVector amplitudes) : amp_(std::move(amplitudes)) {}

    Eigen::Index dim() const { return amp_.size(); }
    const ComplexVector& amplitudes() const { return amp_; }
    ComplexVector& amplitudes() { return amp_; }
    Complex operator[](Eigen::Index i) const { return amp_(i); }

    double norm() const { return amp_.norm(); }
    bool is_normalized(double tol = 1e-10) const { return std::abs(norm() - 1.0) <= tol; }

private:
    ComplexVector amp_;
};

class QubitCount {
public:
    explicit QubitCount(int n) : n_(n) {
        if (n < 1 || n > 30) throw InvalidDimension("QubitCount: n must be in [1, 30], got " + std::to_string(n));
    }
    int qubits() const { return n_; }
    Eigen::Index dim() const { return Eigen::Index{1} << n_; }

private:
    int n_;
};

inline StateVector basis_state(Eigen::Index dim, Eigen::Index k) {
    if (k < 0 || k >= dim) throw ShapeError("basis_state: index out of range");
    ComplexVector v = ComplexVector::Zero(dim);
    v(k) = 1.0;
    return StateVector(std::move(v));
}

/// (|0...0> + |1...1>)/sqrt(2). For N = 1 this is |+>.
inline StateVector ghz_state(QubitCount n) {
    ComplexVector v = ComplexVector::Zero(n.dim());
    const double amp = 1.0 / std::sqrt(2.0);
    v(0) = amp;
    v(n.dim() - 1) = amp;
    return StateVector(std::move(v));
}

// <a|b>, conjugate-linear in a.
inline Complex overlap(const StateVector& a, const StateVector& b) {
    if (a.dim() != b.dim())
        throw ShapeError("overlap: dimension mismatch " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
    return a.amplitudes().dot(b.amplitudes());
}

// Reduced density matrix of one qubit (MSB-first convention).
inline Eigen::Matrix2cd reduced_qubit_density(const StateVector& psi, int qubit, int n_qubits) {
    const Eigen::Index dim = Eigen::Index{1} << n_qubits;
    if (psi.dim() != dim) throw ShapeError("reduced_qubit_density: dimension mismatch");
    if (qubit < 0 || qubit >= n_qubits) throw PreconditionError("reduced_qubit_density: qubit out of range");
    const Eigen::Index bit = Eigen::Index{1} << (n_qubits - 1 - qubit);
    Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
    for (Eigen::Index i = 0; i < dim; ++i) {
        if (i & bit) continue;
        const Complex a0 = psi[i];
        const Complex a1 = psi[i | bit];
        rho(0, 0) += a0 * std::conj(a0);
        rho(0, 1) += a0 * std::conj(a1);
        rho(1, 0) += a1 * std::conj(a0);
        rho(1, 1) += a1 * std::conj(a1);
    }
    return rho;
}

inline double purity(const Eigen::Matrix2cd& rho) { return (rho * rho).trace().real(); }

} // namespace scrambling
