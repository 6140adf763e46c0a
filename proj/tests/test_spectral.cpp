#include "oracles.hpp"
#include "scrambling/ensembles.hpp"
#include "scrambling/spectral.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <random>

using namespace scrambling;

namespace {

RealMatrix random_symmetric(Eigen::Index d, unsigned seed) {
    std::mt19937_64 eng(seed);
    std::normal_distribution<double> g;
    RealMatrix a(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j <= i; ++j) a(i, j) = a(j, i) = g(eng);
    return a;
}

StateVector random_state(Eigen::Index d, unsigned seed) {
    std::mt19937_64 eng(seed);
    std::normal_distribution<double> g;
    ComplexVector v(d);
    for (auto& x : v) x = {g(eng), g(eng)};
    return StateVector(v / v.norm());
}

} // namespace

TEST(Diagonalize, AlreadyDiagonal) {
    RealMatrix h = RealMatrix::Zero(3, 3);
    h.diagonal() << 1, 2, 3;
    const auto sd = diagonalize(h);
    EXPECT_NEAR((sd.eigenvalues - RealVector::LinSpaced(3, 1, 3)).cwiseAbs().maxCoeff(), 0.0, 1e-14);
    EXPECT_NEAR((sd.eigenvectors - RealMatrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 0.0, 1e-14);
}

TEST(Diagonalize, PauliX) {
    RealMatrix x(2, 2);
    x << 0, 1, 1, 0;
    const auto sd = diagonalize(x);
    EXPECT_NEAR(sd.eigenvalues(0), -1.0, 1e-14);
    EXPECT_NEAR(sd.eigenvalues(1), 1.0, 1e-14);
    const double r = 1.0 / std::sqrt(2.0);
    // Sign convention: largest-magnitude component positive (ties: first index).
    EXPECT_NEAR(std::abs(sd.eigenvectors(0, 0)), r, 1e-14);
    EXPECT_NEAR(sd.eigenvectors(0, 0) * sd.eigenvectors(1, 0), -0.5, 1e-14);
    EXPECT_NEAR(sd.eigenvectors(0, 1) * sd.eigenvectors(1, 1), 0.5, 1e-14);
}

TEST(Diagonalize, MatchesBisectionOracle) {
    for (unsigned s = 0; s < 5; ++s) {
        const RealMatrix h = random_symmetric(8, 100 + s);
        const auto sd = diagonalize(h);
        const auto ev = oracle::eigenvalues_by_bisection(h);
        for (int i = 0; i < 8; ++i) EXPECT_NEAR(sd.eigenvalues(i), ev[static_cast<std::size_t>(i)], 1e-8);
    }
}

TEST(Diagonalize, Invariants) {
    const RpHamiltonian h = build_rp(6, 0.5, 3);
    const auto sd = diagonalize(h);
    for (Eigen::Index i = 1; i < sd.dim(); ++i) EXPECT_LE(sd.eigenvalues(i - 1), sd.eigenvalues(i));
    const RealMatrix& v = sd.eigenvectors;
    EXPECT_LT((v.transpose() * v - RealMatrix::Identity(64, 64)).cwiseAbs().maxCoeff(), 1e-10);
    const RealMatrix rec = v * sd.eigenvalues.asDiagonal() * v.transpose();
    EXPECT_LT((rec - h.matrix).cwiseAbs().maxCoeff(), 1e-8 * h.matrix.cwiseAbs().maxCoeff());
    for (Eigen::Index c = 0; c < 64; ++c) {
        Eigen::Index arg;
        v.col(c).cwiseAbs().maxCoeff(&arg);
        EXPECT_GT(v(arg, c), 0.0);
    }
}

TEST(Diagonalize, AsymmetryPolicy) {
    RealMatrix h(2, 2);
    h << 0, 1, 1 + 1e-9, 0;
    EXPECT_THROW(diagonalize(h), PreconditionError);
    DiagonalizeOptions o;
    o.asymmetry = AsymmetryPolicy::Symmetrize;
    EXPECT_NEAR(diagonalize(h, o).eigenvalues(1), 1.0 + 0.5e-9, 1e-14);
    EXPECT_THROW(diagonalize(RealMatrix(2, 3)), ShapeError);
}

TEST(Evolve, TimeZeroIsIdentity) {
    const auto sd = diagonalize(build_rp(4, 0.3, 1).matrix);
    const StateVector psi = random_state(16, 2);
    EXPECT_LT((evolve(sd, psi, 0.0).amplitudes() - psi.amplitudes()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Evolve, EigenstatePicksUpPhase) {
    RealMatrix h = RealMatrix::Zero(3, 3);
    h.diagonal() << -0.5, 0.25, 2.0;
    const auto sd = diagonalize(h);
    for (Eigen::Index k = 0; k < 3; ++k) {
        const StateVector out = evolve(sd, basis_state(3, k), 1.7);
        const Complex expected = std::polar(1.0, -h(k, k) * 1.7);
        EXPECT_NEAR(std::abs(out[k] - expected), 0.0, 1e-14);
    }
}

TEST(Evolve, GroupPropertyAndTimeReversal) {
    for (unsigned s = 0; s < 10; ++s) {
        const auto sd = diagonalize(build_rp(5, 0.2 * s, s).matrix);
        const StateVector psi = random_state(32, 50 + s);
        const double t1 = 0.3 + 0.1 * s, t2 = -1.1 + 0.37 * s;
        const StateVector composed = evolve(sd, evolve(sd, psi, t1), t2);
        EXPECT_LT((composed.amplitudes() - evolve(sd, psi, t1 + t2).amplitudes()).cwiseAbs().maxCoeff(), 1e-10);
        const StateVector back = evolve(sd, evolve(sd, psi, t1), -t1);
        EXPECT_LT((back.amplitudes() - psi.amplitudes()).cwiseAbs().maxCoeff(), 1e-9);
    }
}

TEST(Evolve, NormAndEnergyConservation) {
    const RpHamiltonian h = build_rp(6, 0.1, 9);
    const auto sd = diagonalize(h);
    const StateVector psi = random_state(64, 3);
    const double e0 = expectation(h.matrix, psi);
    for (double t : {0.01, 0.5, 3.0, 100.0, 5000.0}) {
        const StateVector out = evolve(sd, psi, t);
        EXPECT_LT(std::abs(out.norm() - 1.0), 1e-10);
        EXPECT_LT(std::abs(expectation(h.matrix, out) - e0), 1e-8 * std::max(1.0, std::abs(e0)));
    }
}

TEST(Evolve, DimensionMismatch) {
    const auto sd = diagonalize(build_rp(2, 0.3, 1).matrix);
    EXPECT_THROW(evolve(sd, random_state(8, 1), 1.0), ShapeError);
}

TEST(Propagator, IdentityAtZero) {
    const auto sd = diagonalize(build_rp(3, 0.3, 4).matrix);
    EXPECT_LT((propagator(sd, 0.0) - ComplexMatrix::Identity(8, 8)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Propagator, PauliXClosedForm) {
    RealMatrix x(2, 2);
    x << 0, 1, 1, 0;
    const auto sd = diagonalize(x);
    for (double t : {0.3, std::numbers::pi / 2, 2.0}) {
        ComplexMatrix expected = std::cos(t) * ComplexMatrix::Identity(2, 2) -
                                 Complex(0, std::sin(t)) * x.cast<Complex>();
        EXPECT_LT((propagator(sd, t) - expected).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Propagator, MatchesTaylorSeries) {
    const RealMatrix h = random_symmetric(6, 77);
    const auto sd = diagonalize(h);
    EXPECT_LT((propagator(sd, 0.1) - oracle::taylor_propagator(h, 0.1, 30)).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Propagator, Unitary) {
    const auto sd = diagonalize(build_rp(6, 0.1, 12).matrix);
    for (double t : {0.7, 20.0, 5000.0}) {
        const ComplexMatrix u = propagator(sd, t);
        EXPECT_LT((u * u.adjoint() - ComplexMatrix::Identity(64, 64)).cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(GapRatio, ClosedForms) {
    RealVector e(4);
    e << 0, 1, 2, 3;
    EXPECT_DOUBLE_EQ(gap_ratio(e), 1.0);
    RealVector f(3);
    f << 0, 1, 3;
    EXPECT_DOUBLE_EQ(gap_ratio(f), 0.5);
    RealVector deg(3);
    deg << 1, 1, 1;
    EXPECT_EQ(gap_ratio(deg), 0.0);
    EXPECT_THROW(gap_ratio(RealVector::Zero(2)), PreconditionError);
}

// Reference values come from independent sampling: pure GOE matrices and
// uncorrelated levels, measured with the oracle's own gap-ratio routine.
TEST(GapRatio, OracleReferences) {
    const double goe = oracle::goe_gap_ratio(64, 40, 5);
    const double poisson = oracle::poisson_gap_ratio(256, 200, 6);
    EXPECT_NEAR(goe, 0.5307, 0.015);
    EXPECT_NEAR(poisson, 0.3863, 0.01);
}

TEST(GapRatio, GoePooledAt256) {
    double s = 0.0;
    for (Seed k = 0; k < 10; ++k) s += gap_ratio(diagonalize(sample_goe(256, 300 + k).matrix()));
    EXPECT_NEAR(s / 10, 0.53, 0.02);
}
