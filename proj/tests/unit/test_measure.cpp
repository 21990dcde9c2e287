#include <array>
#include <cmath>

#include <gtest/gtest.h>

#include "nhm/envelope.hpp"
#include "nhm/errors.hpp"
#include "nhm/measure.hpp"
#include "nhm/models.hpp"
#include "nhm/random.hpp"
#include "nhm/twostate.hpp"

using namespace nhm;

namespace {

Operator spin_effective() { return pauli_x() + pauli_y() + kI * pauli_z(); }

}  // namespace

TEST(Impulsive, EigenstateAndIdentityShift) {
    const PointerState p = PointerState::gaussian(1.0, 128);
    const ImpulsiveResult up = impulsive_measure(spin_up(Axis::Z), pauli_z(), p);
    EXPECT_NEAR(up.outcome.shift_q, 1.0, 1e-9);
    EXPECT_NEAR(up.outcome.shift_p, 0.0, 1e-12);
    EXPECT_NEAR(up.outcome.fidelity, 1.0, 1e-12);
    EXPECT_EQ(up.outcome.expected_value, Complex(1.0, 0.0));
    EXPECT_NEAR(up.outcome.postselection_weight, 1.0, 1e-12);

    const ImpulsiveResult id = impulsive_measure(StateVector{0.6, Complex(0.0, 0.8)}, Operator::identity(2), p);
    EXPECT_NEAR(id.outcome.shift_q, 1.0, 1e-9);
}

TEST(Impulsive, BimodalMasses) {
    const Operator a{{6.0, 0.0}, {0.0, -6.0}};
    const PointerState p = PointerState::gaussian(1.0, 512, 16.0);
    const ImpulsiveResult r = impulsive_measure(StateVector{1.0, 1.0}.normalized(), a, p);
    const RealVector density = position_density(r.joint, 0);
    double left = 0.0, right = 0.0;
    for (int j = 0; j < p.grid().size(); ++j) (p.grid().q(j) < 0.0 ? left : right) += density(j) * p.grid().dq();
    EXPECT_NEAR(left, 0.5, 1e-10);
    EXPECT_NEAR(right, 0.5, 1e-10);
    EXPECT_NEAR(r.outcome.shift_q, 0.0, 1e-9);
    EXPECT_NEAR(r.outcome.fidelity, 0.5, 1e-12);
}

TEST(Impulsive, ConservesNormPerSample) {
    Rng rng(31);
    const Operator a(random_hermitian(rng, 3));
    const StateVector phi = StateVector(random_complex_vector(rng, 3)).normalized();
    const PointerState p = PointerState::gaussian(1.0, 64);
    const ImpulsiveResult r = impulsive_measure(phi, a, p);
    for (int k = 0; k < 64; ++k)
        EXPECT_NEAR(r.joint.amplitudes.col(k).squaredNorm(), std::norm(p.momentum_amplitudes()(k)), 1e-13);
    EXPECT_NEAR(r.joint.norm_squared(), 1.0, 1e-12);
    // <Q> shift is <A>
    const Complex expect = phi.inner(apply(a, phi));
    EXPECT_NEAR(r.outcome.shift_q, expect.real(), 1e-9);
}

TEST(Impulsive, RefusesNonHermitian) {
    EXPECT_THROW(impulsive_measure(spin_down(Axis::Y), spin_effective(), PointerState::gaussian(1.0, 16)),
                 NonHermitianObservable);
    EXPECT_THROW(born_statistics(spin_down(Axis::Y), spin_effective()), NonHermitianObservable);
    EXPECT_THROW(impulsive_measure(StateVector{1.0}, pauli_x(), PointerState::gaussian(1.0, 16)), DimensionMismatch);
}

TEST(Impulsive, BornSampling) {
    const StateVector phi = StateVector{std::sqrt(0.2), std::sqrt(0.8)};
    const BornStatistics s = born_statistics(phi, pauli_z());
    ASSERT_EQ(s.eigenvalues.size(), 2);
    EXPECT_DOUBLE_EQ(s.eigenvalues(0), -1.0);
    EXPECT_NEAR(s.distribution.probabilities[0], 0.8, 1e-14);
    const std::size_t n = 100000;
    std::size_t low = 0;
    for (Index i : sample_collapses(s.distribution, 77, n)) low += i == 0 ? 1 : 0;
    EXPECT_LT(std::abs(static_cast<double>(low) - 0.8 * n), 3.0 * std::sqrt(n * 0.8 * 0.2));
}

TEST(Adiabatic, IdentityShiftsByOne) {
    Rng rng(3);
    const Operator h(random_hermitian(rng, 3));
    const StateVector phi(random_complex_vector(rng, 3));
    const AdiabaticResult r =
        adiabatic_measure(h, Operator::identity(3), phi, PointerState::gaussian(1.0, 32), Envelope(5.0));
    EXPECT_NEAR(r.outcome.shift_q, 1.0, 1e-9);
    EXPECT_NEAR(r.outcome.expected_value.real(), 1.0, 1e-12);
}

TEST(Adiabatic, SpinEffectiveWeakValues) {
    const PointerState p = PointerState::gaussian(1.0, 32);
    const Envelope env(40.0);
    const AdiabaticResult x = adiabatic_measure(spin_effective(), pauli_x(), spin_down(Axis::Y), p, env);
    EXPECT_EQ(x.outcome.branch, Index{1});
    EXPECT_NEAR(std::abs(x.outcome.expected_value + 1.0), 0.0, 1e-12);
    EXPECT_NEAR(x.outcome.shift_q, -1.0, 1e-2);
    EXPECT_GT(x.outcome.fidelity, 0.99);
    EXPECT_FALSE(x.outcome.adiabaticity_violated);
    EXPECT_NEAR(x.outcome.fidelity + x.outcome.error_norm * x.outcome.error_norm, 1.0, 1e-12);

    const AdiabaticResult z = adiabatic_measure(spin_effective(), pauli_z(), spin_down(Axis::Y), p, env);
    EXPECT_NEAR(std::abs(z.outcome.expected_value + kI), 0.0, 1e-12);
    // Re(-i) = 0; the residual position shift is O(1/T)
    EXPECT_NEAR(z.outcome.shift_q, 0.0, 5e-2);
    EXPECT_GT(std::abs(z.outcome.shift_p), 0.1);
}

TEST(Adiabatic, HermitianGivesExpectationValue) {
    Rng rng(11);
    const Operator h(random_hermitian(rng, 3));
    const Operator a(random_hermitian(rng, 3));
    const BiorthogonalSystem b = decompose(h);
    const StateVector phi = b.ket(0);
    const AdiabaticResult r = adiabatic_measure(h, a, phi, PointerState::gaussian(1.0, 32), Envelope(200.0));
    const double expect = phi.inner(apply(a, phi)).real() / phi.norm_squared();
    EXPECT_NEAR(r.outcome.expected_value.real(), expect, 1e-12);
    EXPECT_NEAR(r.outcome.shift_q, expect, 5e-3);
}

TEST(Adiabatic, ThreadCountDoesNotChangeResults) {
    const PointerState p = PointerState::gaussian(1.0, 32);
    AdiabaticOptions one, four;
    four.threads = 4;
    const AdiabaticResult a = adiabatic_measure(spin_effective(), pauli_x(), spin_down(Axis::Y), p, Envelope(10.0), one);
    const AdiabaticResult b = adiabatic_measure(spin_effective(), pauli_x(), spin_down(Axis::Y), p, Envelope(10.0), four);
    EXPECT_EQ(a.steps, b.steps);
    EXPECT_TRUE(a.joint.amplitudes == b.joint.amplitudes);
    EXPECT_EQ(a.outcome.shift_q, b.outcome.shift_q);
}

TEST(Adiabatic, GridRefinementIsStable) {
    const Envelope env(20.0);
    const AdiabaticResult coarse =
        adiabatic_measure(spin_effective(), pauli_x(), spin_down(Axis::Y), PointerState::gaussian(1.0, 32), env);
    const AdiabaticResult fine =
        adiabatic_measure(spin_effective(), pauli_x(), spin_down(Axis::Y), PointerState::gaussian(1.0, 64), env);
    EXPECT_NEAR(coarse.outcome.shift_q, fine.outcome.shift_q, 1e-6);
}

TEST(Adiabatic, StepControl) {
    const PointerState p = PointerState::gaussian(1.0, 16);
    const Envelope env(10.0);
    const std::array<Operator, 1> obs{pauli_x()};
    const std::array<PointerState, 1> ptrs{p};
    const int n = auto_steps(spin_effective(), obs, ptrs, env, 0.1);
    EXPECT_GT(n, 1);
    AdiabaticOptions opts;
    opts.steps = n / 2;
    EXPECT_THROW(adiabatic_measure(spin_effective(), pauli_x(), spin_down(Axis::Y), p, env, opts), InvalidArgument);
    opts.steps = 2 * n;
    EXPECT_EQ(adiabatic_measure(spin_effective(), pauli_x(), spin_down(Axis::Y), p, env, opts).steps, 2 * n);
}

TEST(Simultaneous, SameObservableTwice) {
    const std::array<Operator, 2> obs{pauli_x(), pauli_x()};
    const std::array<PointerState, 2> ptrs{PointerState::gaussian(1.0, 16), PointerState::gaussian(1.0, 16)};
    const SimultaneousResult r = simultaneous_adiabatic(spin_effective(), obs, spin_down(Axis::Y), ptrs, Envelope(40.0));
    ASSERT_EQ(r.outcomes.size(), 2u);
    EXPECT_NEAR(r.outcomes[0].shift_q, r.outcomes[1].shift_q, 1e-12);
    EXPECT_NEAR(r.outcomes[0].shift_q, -1.0, 2e-2);
}

TEST(Simultaneous, HermitianMatchesSingleMeasurements) {
    Rng rng(41);
    const Operator h(random_hermitian(rng, 3));
    const Operator a(random_hermitian(rng, 3)), b(random_hermitian(rng, 3));
    const StateVector phi = decompose(h).ket(1);
    const Envelope env(400.0);
    const PointerState p = PointerState::gaussian(1.0, 32);
    const std::array<Operator, 2> obs{a, b};
    const std::array<PointerState, 2> ptrs{p, p};
    const SimultaneousResult both = simultaneous_adiabatic(h, obs, phi, ptrs, env);
    const AdiabaticResult ra = adiabatic_measure(h, a, phi, p, env);
    const AdiabaticResult rb = adiabatic_measure(h, b, phi, p, env);
    // cross terms between the two couplings only vanish as T grows
    EXPECT_NEAR(both.outcomes[0].shift_q, ra.outcome.shift_q, 1e-5);
    EXPECT_NEAR(both.outcomes[1].shift_q, rb.outcome.shift_q, 1e-5);
}

TEST(Simultaneous, Limits) {
    const PointerState p = PointerState::gaussian(1.0, 16);
    const std::array<Operator, 4> four{pauli_x(), pauli_y(), pauli_z(), pauli_x()};
    const std::array<PointerState, 4> ptrs4{p, p, p, p};
    EXPECT_THROW(simultaneous_adiabatic(spin_effective(), four, spin_down(Axis::Y), ptrs4, Envelope(1.0)),
                 GridTooLarge);
    const std::array<Operator, 2> two{pauli_x(), pauli_z()};
    const std::array<PointerState, 2> ptrs2{p, p};
    AdiabaticOptions opts;
    opts.max_grid_samples = 255;
    EXPECT_THROW(simultaneous_adiabatic(spin_effective(), two, spin_down(Axis::Y), ptrs2, Envelope(1.0), opts),
                 GridTooLarge);
    const std::array<PointerState, 1> ptrs1{p};
    EXPECT_THROW(simultaneous_adiabatic(spin_effective(), two, spin_down(Axis::Y), ptrs1, Envelope(1.0)),
                 DimensionMismatch);
}

TEST(Convergence, StudyRowsAndOrdering) {
    AdiabaticSetup setup{spin_effective(), pauli_x(), spin_down(Axis::Y), PointerState::gaussian(1.0, 16)};
    const std::array<double, 2> bad{10.0, 5.0};
    EXPECT_THROW(adiabatic_convergence_study(setup, bad), InvalidArgument);
    const std::array<double, 3> ts{10.0, 20.0, 40.0};
    const auto rows = adiabatic_convergence_study(setup, ts);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[2].duration, 40.0);
    EXPECT_LT(rows[2].deviation, rows[0].deviation);
    EXPECT_NEAR(rows[2].deviation, std::abs(rows[2].shift_q + 1.0), 1e-12);
}

TEST(BranchOverlap, GaussianClosedForm) {
    const PointerState p = PointerState::gaussian(1.0, 256);
    EXPECT_NEAR(branch_pointer_overlap(p, 1.0, -1.0), std::exp(-0.5), 1e-10);
    EXPECT_NEAR(branch_pointer_overlap(p, 0.3, 0.3), 1.0, 1e-14);
}
