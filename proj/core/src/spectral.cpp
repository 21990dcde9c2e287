#include "nhm/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <spdlog/spdlog.h>

#include "nhm/errors.hpp"
#include "nhm/linalg.hpp"

namespace nhm {

StateVector BiorthogonalSystem::ket(Index i) const {
    if (i < 0 || i >= dim()) throw IndexOutOfRange("branch index " + std::to_string(i) + " out of range");
    return StateVector(kets.col(i));
}

StateVector BiorthogonalSystem::bra(Index i) const {
    if (i < 0 || i >= dim()) throw IndexOutOfRange("branch index " + std::to_string(i) + " out of range");
    return StateVector(bras.col(i));
}

Complex BiorthogonalSystem::overlap(Index i) const { return bras.col(i).dot(kets.col(i)); }

double BiorthogonalSystem::min_gap() const {
    double gap = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < dim(); ++i)
        for (Index j = i + 1; j < dim(); ++j) gap = std::min(gap, std::abs(eigenvalues(i) - eigenvalues(j)));
    return gap;
}

namespace {

// Largest component made real positive; near-ties resolved by lowest index.
void fix_phase(Eigen::Ref<Vector> v) {
    const double top = v.cwiseAbs().maxCoeff();
    for (Index k = 0; k < v.size(); ++k) {
        if (std::abs(v(k)) >= top * (1.0 - 1e-10)) {
            v *= std::conj(v(k)) / std::abs(v(k));
            v(k) = Complex(std::abs(v(k)), 0.0);
            return;
        }
    }
}

bool precedes(Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
}

}  // namespace

Index nearest_eigenvalue(const Vector& eigenvalues, Complex w) {
    Index best = 0;
    for (Index i = 1; i < eigenvalues.size(); ++i)
        if (std::abs(eigenvalues(i) - w) < std::abs(eigenvalues(best) - w)) best = i;
    return best;
}

BiorthogonalSystem decompose(const Operator& h, const DecomposeOptions& opts) {
    const Index n = h.dim();
    const double tol = opts.tol > 0.0 ? opts.tol : 1e-8 * std::max(spectral_norm(h.matrix()), 1e-300);

    Eigen::ComplexEigenSolver<Matrix> right(h.matrix(), true);
    Eigen::ComplexEigenSolver<Matrix> left(Matrix(h.matrix().adjoint()), true);
    if (right.info() != Eigen::Success || left.info() != Eigen::Success)
        throw NumericalError("eigensolver failed to converge");

    const Vector& w = right.eigenvalues();
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j)
            if (std::abs(w(i) - w(j)) <= tol)
                throw DegenerateSpectrum("eigenvalues " + std::to_string(i) + " and " + std::to_string(j) +
                                         " coincide within tol");

    // H^dagger v = conj(w) v  <=>  v^dagger H = w v^dagger.
    const Vector conj_left = left.eigenvalues().conjugate();
    std::vector<Index> partner(static_cast<std::size_t>(n), -1);
    std::vector<bool> taken(static_cast<std::size_t>(n), false);
    for (Index i = 0; i < n; ++i) {
        Index best = -1;
        double best_d = std::numeric_limits<double>::infinity();
        double second_d = std::numeric_limits<double>::infinity();
        for (Index j = 0; j < n; ++j) {
            const double d = std::abs(conj_left(j) - w(i));
            if (d < best_d) {
                second_d = best_d;
                best_d = d;
                best = j;
            } else if (d < second_d) {
                second_d = d;
            }
        }
        if (taken[static_cast<std::size_t>(best)] || second_d <= tol)
            throw DegenerateSpectrum("ambiguous left/right eigenvector pairing for eigenvalue " + std::to_string(i));
        taken[static_cast<std::size_t>(best)] = true;
        partner[static_cast<std::size_t>(i)] = best;
    }

    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return precedes(w(a), w(b)); });

    BiorthogonalSystem out;
    out.eigenvalues.resize(n);
    out.kets.resize(n, n);
    out.bras.resize(n, n);
    for (Index k = 0; k < n; ++k) {
        const Index i = order[static_cast<std::size_t>(k)];
        Vector phi = right.eigenvectors().col(i);
        phi /= phi.norm();
        fix_phase(phi);
        Vector psi = left.eigenvectors().col(partner[static_cast<std::size_t>(i)]);
        const Complex s = psi.dot(phi);
        if (std::abs(s) <= 1e-14 * psi.norm())
            throw DegenerateSpectrum("left and right eigenvectors are orthogonal (exceptional point)");
        psi /= std::conj(s);
        out.eigenvalues(k) = w(i);
        out.kets.col(k) = phi;
        out.bras.col(k) = psi;
    }
    return out;
}

Operator reconstruct(const BiorthogonalSystem& b) {
    const Index n = b.dim();
    Matrix m = Matrix::Zero(b.kets.rows(), b.kets.rows());
    for (Index i = 0; i < n; ++i) m += (b.eigenvalues(i) / b.overlap(i)) * b.kets.col(i) * b.bras.col(i).adjoint();
    return Operator(m);
}

double biorthogonality_residual(const BiorthogonalSystem& b) {
    double r = 0.0;
    for (Index i = 0; i < b.dim(); ++i)
        for (Index j = 0; j < b.dim(); ++j)
            if (i != j) r = std::max(r, std::abs(b.bras.col(i).dot(b.kets.col(j))));
    return r;
}

PerturbationResult perturbed_eigenvalue(const BiorthogonalSystem& b, const Operator& a, double coupling,
                                        Index branch) {
    if (b.degenerate) throw DegenerateSpectrum("perturbation theory needs a non-degenerate spectrum");
    if (branch < 0 || branch >= b.dim()) throw IndexOutOfRange("branch index out of range");
    if (a.dim() != b.kets.rows()) throw DimensionMismatch("observable dimension does not match system");

    PerturbationResult r;
    r.branch = branch;
    r.omega = b.eigenvalues(branch);
    r.coupling = coupling;
    const Vector a_phi = a.matrix() * b.kets.col(branch);
    r.shift = coupling * b.bras.col(branch).dot(a_phi) / b.overlap(branch);
    r.mixing = Vector::Zero(b.dim());
    for (Index j = 0; j < b.dim(); ++j) {
        if (j == branch) continue;
        const Complex gap = r.omega - b.eigenvalues(j);
        if (gap == Complex(0.0)) throw DegenerateSpectrum("zero gap in perturbation denominator");
        r.mixing(j) = coupling * b.bras.col(j).dot(a_phi) / (b.overlap(j) * gap);
    }
    const double strength = std::abs(coupling) * spectral_norm(a.matrix());
    if (b.dim() > 1 && strength >= 0.1 * b.min_gap()) {
        r.small_coupling = false;
        spdlog::warn("perturbed_eigenvalue: coupling*||A|| = {} is not small against the minimal gap {}", strength,
                     b.min_gap());
    }
    return r;
}

}  // namespace nhm
