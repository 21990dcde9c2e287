#pragma once

#include <array>
#include <string>
#include <vector>

#include "nhm/spectral.hpp"
#include "nhm/types.hpp"

namespace nhm {

// --- spin-1/2 building blocks -------------------------------------------

enum class Axis { X, Y, Z };

Operator pauli(Axis axis);
Operator pauli_x();
Operator pauli_y();
Operator pauli_z();

/// Eigenvectors of sigma_n with eigenvalue +1 / -1, in the sigma_z basis,
/// first component real and non-negative.
StateVector spin_up(Axis axis);
StateVector spin_down(Axis axis);

// --- collective spin ------------------------------------------------------

struct SpinOperators {
    Operator x;
    Operator y;
    Operator z;
};

/// Dimension 2N+1; throws InvalidSpin unless 2N is a positive integer.
Index spin_dimension(double n);

/// Standard (2N+1)-dimensional irrep: S_z = diag(N, N-1, ..., -N),
/// S_+ with real non-negative entries.
SpinOperators spin_operators(double n);

/// The same irrep quantized along x: S_x = diag(N, ..., -N) and
/// (S_y, S_z) the standard (S_x, S_y). Used as the SpinModel basis, where
/// |S_x = N> is the first basis vector.
SpinOperators spin_operators_x_basis(double n);

/// Large spin N coupled to a spin-1/2 through H_0 = lambda S.sigma, with the
/// large spin pre-selected in |S_x = N> and post-selected in <S_y = N|.
///
/// Product-space ordering is |m_x> (x) |s>, large spin first, m_x = N..-N,
/// small spin in the sigma_z basis.
struct SpinModel {
    double n = 0.5;
    double lambda = 1.0;
    SpinOperators large;  // x-quantized, dimension 2N+1
    Operator s_full_x, s_full_y, s_full_z;
    Operator sigma_full_x, sigma_full_y, sigma_full_z;
    Operator h0;
    StateVector pre;   // |S_x = N>
    StateVector post;  // ket of the post-selected bra <S_y = N|
    std::vector<std::string> warnings;
};

SpinModel build_spin_model(double n, double lambda);

/// (S_x, S_y, S_z)_w for <S_y = N| |S_x = N>.
std::array<Complex, 3> spin_weak_values(const SpinModel& model);

/// lambda * (S_w . sigma) as a 2x2 operator, i.e. lambda N (sigma_x + sigma_y + i sigma_z).
Operator effective_hamiltonian(const SpinModel& model);

enum class SectorMode {
    Auto,  // restricted to the J_x in {N+1/2, N-1/2, N-3/2} sectors, cross-checked against full space for small N
    Full,
    Restricted,
};

struct ExactSpinOptions {
    SectorMode mode = SectorMode::Auto;
    /// Auto mode also runs the full space and compares when N <= this.
    double cross_check_max_n = 16.0;
    double cross_check_tol = 1e-8;
    double ramp_fraction = 0.1;
};

/// Conditional (ABL) probability that the small spin, prepared in |down_y>
/// with the large spin in |S_x = N>, is found in |up_y> at time t, given
/// post-selection of <S_y = N| at time T (small spin unobserved at T).
/// Evolution is exact under H_0.
double exact_transition_probability(double n, double lambda, double total_time, double t,
                                    const ExactSpinOptions& opts = {});

/// Exact pre/post-selected run with a momentum-eigenstate pointer coupled via
/// g(t) P sigma_x (sin^2 envelope of duration T, `steps` slices).
struct ExactAdiabaticCheck {
    /// Post-selected small-spin state divided by <S_y = N|S_x = N>.
    Vector exact;
    /// Same protocol under H_eff.
    Vector effective;
    /// e^{-i w T} e^{-i P (sigma_x)_w} |down_y> with w = -lambda N.
    Vector ideal;
    /// Components of exact - effective: along |down_y> (pointer phase in the
    /// wrong direction / magnitude) and along |up_y> (spin flip).
    double wrong_direction_norm = 0.0;
    double spin_flip_norm = 0.0;
    double total_error_norm = 0.0;
    /// |<up_y|exact>|: flip amplitude of the exact state itself.
    double exact_flip_amplitude = 0.0;
    bool cross_checked = false;
    double sector_discrepancy = 0.0;
};

ExactAdiabaticCheck exact_adiabatic_check(double n, double lambda, double total_time, double momentum, int steps,
                                          const ExactSpinOptions& opts = {});

/// Pointer shift read off the exact dynamics: -d arg<down_y|exact(P)>/dP by
/// a central difference with step h around P = 0.
double spin_pointer_shift(double n, double lambda, double total_time, int steps, double h = 1e-3,
                          const ExactSpinOptions& opts = {});

// --- Kaon-like two-level system ------------------------------------------

struct KaonModel {
    Complex epsilon;
    Complex omega_long;
    Complex omega_short;
    Operator h_eff;
    BiorthogonalSystem spectrum;
    Index long_branch = 0;
    Index short_branch = 1;
    StateVector k_long;       // unit ket |K_L>
    StateVector k_short;      // unit ket |K_S>
    StateVector k_long_bra;   // unit-norm ket form of <K_L'|
    StateVector k_short_bra;  // unit-norm ket form of <K_S'|

    /// <K_S|K_L> with unit kets.
    [[nodiscard]] Complex short_long_overlap() const;
    /// 1 - |<K_L'|K_L>| with unit bra and ket.
    [[nodiscard]] double left_right_defect() const;
};

/// Eigenkets (1, +-(1-eps)/(1+eps)) (normalized) with eigenvalues
/// (omega_L, omega_S); H_eff is assembled by spectral reconstruction and then
/// decomposed again for the eigenbras.
KaonModel build_kaon_like(Complex epsilon, Complex omega_long, Complex omega_short);

}  // namespace nhm
