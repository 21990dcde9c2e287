#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "nhm/errors.hpp"
#include "nhm/models.hpp"
#include "nhm/spectral.hpp"
#include "nhm/stats.hpp"
#include "nhm/twostate.hpp"

using namespace nhm;

namespace {

double commutator_defect(const SpinOperators& s) {
    const Matrix c = s.x.matrix() * s.y.matrix() - s.y.matrix() * s.x.matrix();
    return (c - kI * s.z.matrix()).cwiseAbs().maxCoeff();
}

}  // namespace

TEST(Spin, AlgebraAndCasimir) {
    for (double n : {0.5, 1.0, 1.5, 4.0, 20.0}) {
        for (const SpinOperators& s : {spin_operators(n), spin_operators_x_basis(n)}) {
            EXPECT_LT(commutator_defect(s), 1e-12) << n;
            const Matrix c = s.x.matrix() * s.x.matrix() + s.y.matrix() * s.y.matrix() + s.z.matrix() * s.z.matrix();
            const Index d = spin_dimension(n);
            EXPECT_LT((c - n * (n + 1.0) * Matrix::Identity(d, d)).cwiseAbs().maxCoeff(), 1e-10) << n;
        }
    }
}

TEST(Spin, SmallExamples) {
    const SpinOperators half = spin_operators(0.5);
    EXPECT_LT((half.x.matrix() - 0.5 * pauli_x().matrix()).norm(), 1e-15);
    EXPECT_LT((half.y.matrix() - 0.5 * pauli_y().matrix()).norm(), 1e-15);
    EXPECT_LT((half.z.matrix() - 0.5 * pauli_z().matrix()).norm(), 1e-15);

    const SpinOperators one = spin_operators(1.0);
    const double r = 1.0 / std::sqrt(2.0);
    const Operator sx{{0.0, r, 0.0}, {r, 0.0, r}, {0.0, r, 0.0}};
    const Operator sz{{1.0, 0.0, 0.0}, {0.0, 0.0, 0.0}, {0.0, 0.0, -1.0}};
    EXPECT_LT((one.x.matrix() - sx.matrix()).norm(), 1e-15);
    EXPECT_LT((one.z.matrix() - sz.matrix()).norm(), 1e-15);
    EXPECT_EQ(spin_dimension(20.0), 41);
}

TEST(Spin, InvalidValues) {
    EXPECT_THROW(spin_dimension(0.3), InvalidSpin);
    EXPECT_THROW(spin_dimension(-0.5), InvalidSpin);
    EXPECT_THROW(spin_dimension(std::nan("")), InvalidSpin);
    EXPECT_THROW(build_spin_model(1.0, 0.0), InvalidArgument);
}

TEST(Spin, PauliSpinors) {
    for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
        const Operator s = pauli(a);
        EXPECT_LT((apply(s, spin_up(a)).amplitudes() - spin_up(a).amplitudes()).norm(), 1e-15);
        EXPECT_LT((apply(s, spin_down(a)).amplitudes() + spin_down(a).amplitudes()).norm(), 1e-15);
        EXPECT_DOUBLE_EQ(spin_up(a)[0].imag(), 0.0);
        EXPECT_GE(spin_up(a)[0].real(), 0.0);
    }
    EXPECT_NEAR(std::abs(spin_down(Axis::Y)[1] - Complex(0.0, -1.0 / std::sqrt(2.0))), 0.0, 1e-15);
}

TEST(SpinModel, HalfSpinHamiltonianSpectrum) {
    const double lambda = 0.2;
    const SpinModel m = build_spin_model(0.5, lambda);
    Eigen::SelfAdjointEigenSolver<Matrix> es(m.h0.matrix());
    // lambda S.sigma with S = sigma/2: singlet -3 lambda/2, triplet lambda/2
    EXPECT_NEAR(es.eigenvalues()(0), -1.5 * lambda, 1e-14);
    for (int i = 1; i < 4; ++i) EXPECT_NEAR(es.eigenvalues()(i), 0.5 * lambda, 1e-14);
}

TEST(SpinModel, StatesAndWeakValues) {
    const SpinModel m = build_spin_model(20.0, 0.05);
    // lambda N = 1 sits on the boundary of the validated regime
    EXPECT_EQ(m.warnings.size(), 1u);
    EXPECT_NEAR(m.pre.norm(), 1.0, 1e-14);
    EXPECT_NEAR(m.post.norm(), 1.0, 1e-12);
    EXPECT_NEAR(m.pre.inner(apply(m.large.x, m.pre)).real(), 20.0, 1e-12);
    EXPECT_NEAR(m.post.inner(apply(m.large.y, m.post)).real(), 20.0, 1e-10);
    EXPECT_NEAR(std::abs(m.post.inner(m.pre)), std::pow(2.0, -20.0), 1e-18);

    const auto sw = spin_weak_values(m);
    EXPECT_NEAR(std::abs(sw[0] - 20.0), 0.0, 1e-10);
    EXPECT_NEAR(std::abs(sw[1] - 20.0), 0.0, 1e-10);
    EXPECT_NEAR(std::abs(sw[2] - Complex(0.0, 20.0)), 0.0, 1e-10);

    const Operator h = effective_hamiltonian(m);
    const Operator expect = Complex(1.0, 0.0) * Operator{{kI, Complex(1.0, -1.0)}, {Complex(1.0, 1.0), -kI}};
    EXPECT_LT((h.matrix() - expect.matrix()).norm(), 1e-10);
    const BiorthogonalSystem b = decompose(h);
    EXPECT_NEAR(std::abs(b.eigenvalues(0) - 1.0), 0.0, 1e-10);
    EXPECT_NEAR(std::abs(b.eigenvalues(1) + 1.0), 0.0, 1e-10);
}

TEST(SpinModel, Warnings) {
    EXPECT_EQ(build_spin_model(4.0, 2.0).warnings.size(), 1u);
    EXPECT_EQ(build_spin_model(2.0, 0.1).warnings.size(), 1u);
    EXPECT_EQ(build_spin_model(0.5, 1.5).warnings.size(), 2u);
}

TEST(SpinModel, StretchedStateIsEigenvector) {
    const double n = 6.0, lambda = 0.1;
    const SpinModel m = build_spin_model(n, lambda);
    Vector v = Vector::Zero(m.h0.dim());
    v.segment(0, 2) = spin_up(Axis::X).amplitudes();
    EXPECT_LT((m.h0.matrix() * v - lambda * n * v).norm(), 1e-12);
}

TEST(ExactSpin, TransitionLimits) {
    EXPECT_NEAR(exact_transition_probability(8.0, 0.125, 0.5, 0.0), 0.0, 1e-14);
    EXPECT_NEAR(exact_transition_probability(8.0, 0.0, 0.5, 0.25), 0.0, 1e-14);
    const double p = exact_transition_probability(8.0, 0.125, 0.5, 0.25);
    EXPECT_GT(p, 0.0);
    EXPECT_LT(p, 0.1);
    EXPECT_THROW(exact_transition_probability(8.0, 0.125, 0.5, 0.6), InvalidArgument);
    EXPECT_THROW(exact_transition_probability(8.0, -1.0, 0.5, 0.2), InvalidArgument);
}

TEST(ExactSpin, RestrictedSectorsMatchFullSpace) {
    ExactSpinOptions full, restricted;
    full.mode = SectorMode::Full;
    restricted.mode = SectorMode::Restricted;
    for (double n : {2.0, 5.0, 12.0}) {
        EXPECT_NEAR(exact_transition_probability(n, 1.0 / n, 0.5, 0.25, full),
                    exact_transition_probability(n, 1.0 / n, 0.5, 0.25, restricted), 1e-12);
        const ExactAdiabaticCheck a = exact_adiabatic_check(n, 1.0 / n, 2.0, 1.0, 200);
        EXPECT_TRUE(a.cross_checked);
        EXPECT_LT(a.sector_discrepancy, 1e-12);
    }
    EXPECT_FALSE(exact_adiabatic_check(20.0, 0.05, 2.0, 1.0, 200).cross_checked);
}

TEST(ExactSpin, TransitionScalesAsInverseSquare) {
    std::vector<double> ns{4.0, 8.0, 16.0, 32.0}, ps;
    for (double n : ns) ps.push_back(exact_transition_probability(n, 1.0 / n, 0.5, 0.25));
    EXPECT_NEAR(fit_power_law(ns, ps).slope, -2.0, 0.15);
}

TEST(ExactSpin, ErrorScalesAsInverseN) {
    std::vector<double> ns{8.0, 16.0, 32.0}, errs;
    for (double n : ns) errs.push_back(exact_adiabatic_check(n, 1.0 / n, 2.0, 1.0, 800).total_error_norm);
    EXPECT_NEAR(fit_power_law(ns, errs).slope, -1.0, 0.15);
}

TEST(ExactSpin, NoCouplingFlipIsExactFlip) {
    const ExactAdiabaticCheck c = exact_adiabatic_check(8.0, 0.125, 2.0, 0.0, 400);
    EXPECT_NEAR(c.spin_flip_norm, c.exact_flip_amplitude, 1e-14);
    EXPECT_THROW(exact_adiabatic_check(8.0, 0.125, 2.0, 0.0, 0), InvalidArgument);
}

TEST(ExactSpin, PointerReadsMinusOne) {
    EXPECT_NEAR(spin_pointer_shift(64.0, 1.0 / 16.0, 40.0, 4000), -1.0, 1e-2);
}

TEST(Kaon, OverlapAndDefect) {
    const KaonModel zero = build_kaon_like(0.0, Complex(1.0, -0.001), Complex(1.5, -0.5));
    EXPECT_NEAR(std::abs(zero.short_long_overlap()), 0.0, 1e-14);
    EXPECT_NEAR(zero.left_right_defect(), 0.0, 1e-14);

    const KaonModel small = build_kaon_like(1e-3, Complex(1.0, -0.001), Complex(1.5, -0.5));
    EXPECT_NEAR(std::abs(small.short_long_overlap()), 2e-3, 1e-5);
    EXPECT_NEAR(small.spectrum.eigenvalues(small.long_branch).real(), 1.0, 1e-12);
    EXPECT_NEAR(small.spectrum.eigenvalues(small.short_branch).imag(), -0.5, 1e-12);

    const KaonModel half = build_kaon_like(5e-4, Complex(1.0, -0.001), Complex(1.5, -0.5));
    EXPECT_NEAR(small.left_right_defect() / half.left_right_defect(), 4.0, 0.05);
    EXPECT_NEAR(std::abs(small.short_long_overlap()) / std::abs(half.short_long_overlap()), 2.0, 0.01);
}

TEST(Kaon, Errors) {
    EXPECT_THROW(build_kaon_like(0.1, Complex(1.0, 0.1), Complex(1.5, -0.5)), InvalidArgument);
    EXPECT_THROW(build_kaon_like(1.0, Complex(1.0, -0.1), Complex(1.5, -0.5)), DegenerateSpectrum);
    EXPECT_THROW(build_kaon_like(-1.0, Complex(1.0, -0.1), Complex(1.5, -0.5)), DegenerateSpectrum);
    EXPECT_THROW(build_kaon_like(0.1, Complex(1.0, -0.1), Complex(1.0, -0.1)), DegenerateSpectrum);
}
