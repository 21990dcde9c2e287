#pragma once

#include <optional>
#include <vector>

#include "nhm/types.hpp"

namespace nhm {

/// Spectral data of a diagonalizable (generally non-Hermitian) operator:
/// eigenvalues w_i with right eigenkets |phi_i> and left eigenbras <psi_i|.
///
/// Column i of `kets` is |phi_i>, column i of `bras` holds the ket whose
/// adjoint is <psi_i|. Convention enforced by decompose(): ||phi_i|| = 1,
/// <psi_i|phi_i> = 1, the largest component of |phi_i> is real positive, and
/// eigenvalues are sorted by real part then imaginary part, descending.
struct BiorthogonalSystem {
    Vector eigenvalues;
    Matrix kets;
    Matrix bras;
    bool degenerate = false;

    [[nodiscard]] Index dim() const noexcept { return eigenvalues.size(); }
    [[nodiscard]] StateVector ket(Index i) const;
    [[nodiscard]] StateVector bra(Index i) const;
    /// <psi_i|phi_i>
    [[nodiscard]] Complex overlap(Index i) const;
    /// Smallest |w_i - w_j| over i != j (infinity for dim 1).
    [[nodiscard]] double min_gap() const;
};

struct DecomposeOptions {
    /// Degeneracy / pairing tolerance. Non-positive selects
    /// 1e-8 * ||H||_2.
    double tol = 0.0;
};

/// Biorthogonal eigendecomposition of H. Left eigenvectors come from the
/// eigendecomposition of H^dagger paired to the right ones by nearest
/// conjugated eigenvalue.
///
/// Throws DegenerateSpectrum when two eigenvalues lie within tol, when the
/// pairing is ambiguous, or when <psi_i|phi_i> vanishes (exceptional point).
BiorthogonalSystem decompose(const Operator& h, const DecomposeOptions& opts = {});

/// sum_i w_i |phi_i><psi_i| / <psi_i|phi_i>
Operator reconstruct(const BiorthogonalSystem& b);

/// max_{i != j} |<psi_i|phi_j>|
double biorthogonality_residual(const BiorthogonalSystem& b);

struct PerturbationResult {
    Index branch = 0;
    Complex omega;
    /// First-order shift coupling * <psi_i|A|phi_i> / <psi_i|phi_i>.
    Complex shift;
    double coupling = 0.0;
    /// c_ij for j != i (entry i is zero): first-order admixture of |phi_j>.
    Vector mixing;
    /// False when coupling * ||A|| is not small against the minimal gap.
    bool small_coupling = true;
};

/// First-order perturbation of eigenvalue `branch` of the system under
/// H -> H + coupling * A.
PerturbationResult perturbed_eigenvalue(const BiorthogonalSystem& b, const Operator& a, double coupling,
                                        Index branch);

/// Index of the eigenvalue nearest to `w`.
Index nearest_eigenvalue(const Vector& eigenvalues, Complex w);

}  // namespace nhm
