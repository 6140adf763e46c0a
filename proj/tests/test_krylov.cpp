#include "scrambling/ensembles.hpp"
#include "scrambling/krylov.hpp"
#include "scrambling/spectral.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace scrambling;

namespace {

double max_orthonormality_defect(const KrylovBasis& b) {
    const auto k = b.size();
    return (b.vectors.adjoint() * b.vectors - ComplexMatrix::Identity(k, k)).cwiseAbs().maxCoeff();
}

} // namespace

TEST(Lanczos, EigenstateSeedBreaksDownImmediately) {
    RealMatrix h = RealMatrix::Zero(2, 2);
    h.diagonal() << 1, 2;
    const auto r = lanczos(h, basis_state(2, 0));
    EXPECT_TRUE(r.breakdown);
    ASSERT_EQ(r.basis.size(), 1);
    EXPECT_EQ(r.basis.a(0), 1.0);
    EXPECT_EQ(r.basis.b(0), 0.0);
}

// Hand recursion: K0 = e0, a0 = 0; A1 = H e0 = e1, b1 = 1, K1 = e1, a1 = 0.
TEST(Lanczos, PauliXHandRecursion) {
    RealMatrix h(2, 2);
    h << 0, 1, 1, 0;
    const auto r = lanczos(h, basis_state(2, 0));
    ASSERT_EQ(r.basis.size(), 2);
    EXPECT_EQ(r.basis.a(0), 0.0);
    EXPECT_EQ(r.basis.a(1), 0.0);
    EXPECT_EQ(r.basis.b(0), 0.0);
    EXPECT_EQ(r.basis.b(1), 1.0);
    EXPECT_EQ(r.basis.vectors(1, 1), Complex(1.0));
    EXPECT_TRUE(r.t.dense() == h);
    const RealVector ev = r.t.eigenvalues();
    EXPECT_NEAR(ev(0), -1.0, 1e-15);
    EXPECT_NEAR(ev(1), 1.0, 1e-15);
}

TEST(Lanczos, RandomSymmetricFullDimension) {
    std::mt19937_64 eng(21);
    std::normal_distribution<double> g;
    RealMatrix h(16, 16);
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j <= i; ++j) h(i, j) = h(j, i) = g(eng);
    const StateVector ghz = ghz_state(QubitCount(4));
    const auto r = lanczos(h, ghz);
    ASSERT_EQ(r.basis.size(), 16);
    EXPECT_LT(max_orthonormality_defect(r.basis), 1e-10);
    EXPECT_LT(max_sorted_difference(r.t.eigenvalues(), diagonalize(h).eigenvalues), 1e-8);
    EXPECT_LT((r.basis.vectors.col(0) - ghz.amplitudes()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_EQ(r.basis.b(0), 0.0);
    for (Eigen::Index n = 1; n < 16; ++n) EXPECT_GT(r.basis.b(n), 0.0);
}

TEST(Lanczos, TridiagonalStructure) {
    const RpHamiltonian h = build_rp(5, 0.5, 4);
    const auto r = lanczos(h.matrix, ghz_state(QubitCount(5)));
    const RealMatrix t = r.t.dense();
    for (Eigen::Index i = 0; i < t.rows(); ++i)
        for (Eigen::Index j = 0; j < t.cols(); ++j)
            if (std::abs(i - j) > 1) {
                EXPECT_EQ(t(i, j), 0.0);
            }
    // T_nm = <K_n|H|K_m>
    const ComplexMatrix proj = r.basis.vectors.adjoint() * h.matrix.cast<Complex>() * r.basis.vectors;
    EXPECT_LT((proj.real() - t).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Lanczos, CompletenessAtFullDimension) {
    const RpHamiltonian h = build_rp(5, 0.2, 6);
    const auto r = lanczos(h.matrix, ghz_state(QubitCount(5)));
    ASSERT_EQ(r.basis.size(), 32);
    std::mt19937_64 eng(1);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 10; ++trial) {
        ComplexVector v(32);
        for (auto& x : v) x = {g(eng), g(eng)};
        const StateVector psi(v / v.norm());
        EXPECT_NEAR(krylov_coefficients(r.basis, psi).squaredNorm(), 1.0, 1e-10);
    }
}

TEST(Lanczos, ComplexSeedGivesRealCoefficients) {
    const RpHamiltonian h = build_rp(4, 0.3, 2);
    ComplexVector v = ghz_state(QubitCount(4)).amplitudes();
    v(0) *= Complex(0.0, 1.0);
    const auto r = lanczos(h.matrix, StateVector(v));
    EXPECT_LT(max_orthonormality_defect(r.basis), 1e-10);
    EXPECT_LT(max_sorted_difference(r.t.eigenvalues(), diagonalize(h).eigenvalues), 1e-8);
}

TEST(Lanczos, Preconditions) {
    const RealMatrix h = build_rp(2, 0.3, 2).matrix;
    EXPECT_THROW(lanczos(h, StateVector(ComplexVector::Constant(4, 1.0))), PreconditionError);
    EXPECT_THROW(lanczos(h, basis_state(8, 0)), ShapeError);
    LanczosOptions o;
    o.max_k = 5;
    EXPECT_THROW(lanczos(h, basis_state(4, 0), o), PreconditionError);
    RealMatrix bad = h;
    bad(0, 0) = std::nan("");
    EXPECT_THROW(lanczos(bad, basis_state(4, 0)), NumericalFailure);
}

TEST(Lanczos, TruncatedRun) {
    const RpHamiltonian h = build_rp(6, 0.1, 3);
    LanczosOptions o;
    o.max_k = 10;
    const auto r = lanczos(h.matrix, ghz_state(QubitCount(6)), o);
    EXPECT_EQ(r.basis.size(), 10);
    EXPECT_FALSE(r.breakdown);
    const auto v = validate_basis(r.basis, h.matrix);
    EXPECT_FALSE(v.spectrum_defect.has_value());
    EXPECT_TRUE(v.passed());
}

TEST(Lanczos, WithoutReorthogonalizationLosesOrthogonality) {
    const RpHamiltonian h = build_rp(6, 0.1, 3);
    LanczosOptions o;
    o.reorthogonalize = false;
    const auto r = lanczos(h.matrix, ghz_state(QubitCount(6)), o);
    EXPECT_GT(validate_basis(r.basis, h.matrix).orthonormality_defect, 1e-8);
}

TEST(SpreadComplexity, FirstAndLastBasisVector) {
    const RpHamiltonian h = build_rp(4, 0.3, 5);
    const auto r = lanczos(h.matrix, ghz_state(QubitCount(4)));
    const auto k = r.basis.size();
    const StateVector first(r.basis.vectors.col(0));
    const StateVector last(r.basis.vectors.col(k - 1));
    const double inv_k = 1.0 / static_cast<double>(k);
    EXPECT_NEAR(spread_complexity(r.basis, first, ComplexityMode::MeanModulus), inv_k, 1e-12);
    EXPECT_NEAR(spread_complexity(r.basis, first, ComplexityMode::PositionWeighted), 0.0, 1e-12);
    EXPECT_NEAR(spread_complexity(r.basis, last, ComplexityMode::PositionWeighted), 1.0, 1e-12);
    EXPECT_NEAR(spread_complexity(r.basis, last, ComplexityMode::MeanModulus), inv_k, 1e-12);
}

TEST(SpreadComplexity, UniformSuperposition) {
    const RpHamiltonian h = build_rp(4, 0.3, 5);
    const auto r = lanczos(h.matrix, ghz_state(QubitCount(4)));
    const auto k = static_cast<double>(r.basis.size());
    const ComplexVector v = r.basis.vectors.rowwise().sum() / std::sqrt(k);
    const StateVector psi(v);
    EXPECT_NEAR(spread_complexity(r.basis, psi, ComplexityMode::MeanModulus), 1.0 / std::sqrt(k), 1e-12);
    EXPECT_NEAR(spread_complexity(r.basis, psi, ComplexityMode::CoherentSum), 1.0 / std::sqrt(k), 1e-12);
    EXPECT_NEAR(spread_complexity(r.basis, psi, ComplexityMode::MeanReal), 1.0 / std::sqrt(k), 1e-12);
}

TEST(SpreadComplexity, ModeNames) {
    for (auto m : kAllComplexityModes) EXPECT_EQ(parse_complexity_mode(to_string(m)), m);
    EXPECT_THROW(parse_complexity_mode("nope"), ConfigError);
}

TEST(SpreadComplexity, DimensionMismatch) {
    const auto r = lanczos(build_rp(2, 0.3, 5).matrix, ghz_state(QubitCount(2)));
    EXPECT_THROW(spread_complexity(r.basis, basis_state(8, 0), ComplexityMode::MeanModulus), PreconditionError);
}

TEST(ValidateBasis, HealthyFullBasis) {
    for (int n : {2, 4, 6}) {
        const RpHamiltonian h = build_rp(n, 1.5, 10 + n);
        const auto r = lanczos(h.matrix, ghz_state(QubitCount(n)));
        const auto v = validate_basis(r.basis, h.matrix);
        EXPECT_LT(v.orthonormality_defect, 1e-8);
        ASSERT_TRUE(v.spectrum_defect.has_value());
        EXPECT_LT(*v.spectrum_defect, 1e-6);
        EXPECT_LT(v.recursion_defect, 1e-7);
        EXPECT_TRUE(v.passed());
    }
}

TEST(ValidateBasis, CorruptedVectorFlagged) {
    const RpHamiltonian h = build_rp(3, 0.5, 1);
    auto r = lanczos(h.matrix, ghz_state(QubitCount(3)));
    r.basis.vectors.col(3) *= 1.1;
    const auto v = validate_basis(r.basis, h.matrix);
    EXPECT_NEAR(v.orthonormality_defect, 0.21, 1e-10);
    EXPECT_FALSE(v.passed());
}

TEST(ValidateBasis, SingleVector) {
    RealMatrix h = RealMatrix::Zero(2, 2);
    h.diagonal() << 1, 2;
    auto r = lanczos(h, basis_state(2, 0));
    auto v = validate_basis(r.basis, h);
    EXPECT_EQ(v.recursion_defect, 0.0);
    EXPECT_EQ(v.orthonormality_defect, 0.0);
    r.basis.vectors *= 1.5;
    EXPECT_NEAR(validate_basis(r.basis, h).orthonormality_defect, 1.25, 1e-14);
}

// Chaotic b_n sit above the localized ones on average.
TEST(LanczosCoefficients, ChaoticExceedsLocalizedOnAverage) {
    double chaotic = 0.0, localized = 0.0;
    for (int r = 0; r < 10; ++r) {
        for (auto [gamma, acc] : {std::pair{0.1, &chaotic}, std::pair{5.0, &localized}}) {
            const RpHamiltonian h = build_rp(6, gamma, cell_seed(1, 6, gamma, r));
            const auto lr = lanczos(h.matrix, ghz_state(QubitCount(6)));
            const auto m = std::min<Eigen::Index>(32, lr.basis.size() - 1);
            *acc += lr.basis.b.segment(1, m).mean();
        }
    }
    EXPECT_GT(chaotic, localized);
}
