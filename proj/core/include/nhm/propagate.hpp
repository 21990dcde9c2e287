#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "nhm/spectral.hpp"
#include "nhm/types.hpp"

namespace nhm {

/// alpha_i = <psi_i|Phi> / <psi_i|phi_i>, so that Phi = sum_i alpha_i |phi_i>.
Vector decompose_ket(const StateVector& phi, const BiorthogonalSystem& b);

/// beta_i such that <Psi| = sum_i beta_i <psi_i|. `psi` holds the ket whose
/// adjoint is <Psi|.
Vector decompose_bra(const StateVector& psi, const BiorthogonalSystem& b);

struct EvolutionResult {
    std::vector<double> times;
    std::vector<StateVector> states;  // unnormalized
    std::vector<double> norms;        // N(t) = ||state(t)||^2
};

enum class EvolutionMethod {
    Auto,               // spectral, falling back to the matrix exponential on degeneracy
    Spectral,           // sum_i alpha_i e^{-i w_i t} |phi_i>; throws DegenerateSpectrum
    MatrixExponential,  // exp(-i H t) |Phi>
};

/// Samples |Phi(t)> = exp(-i H t)|Phi> at `samples` uniformly spaced times in
/// [0, t] (a single sample is taken at t itself).
EvolutionResult evolve(const StateVector& phi, const Operator& h, double t, int samples,
                       EvolutionMethod method = EvolutionMethod::Auto);

/// Columns: t, re_0, im_0, ..., re_{d-1}, im_{d-1}, norm.
void write_evolution_csv(std::ostream& out, const EvolutionResult& r);

/// Effective-collapse statistics: w_i = |alpha_i|^2 e^{2 Im(w_i) T}.
struct OutcomeDistribution {
    std::vector<Index> branches;
    std::vector<double> weights;        // raw w_i, may underflow to zero
    std::vector<double> log_weights;    // log w_i (-inf for alpha_i = 0)
    std::vector<double> probabilities;  // normalized p_i
    double total_weight = 0.0;          // W = sum_i w_i (relative post-selection weight)
};

/// Weights are formed in log space, so long metastable runs whose raw
/// weights underflow still yield finite probabilities. Throws AllWeightsZero
/// when every alpha_i vanishes.
OutcomeDistribution outcome_distribution(const Vector& alpha, const BiorthogonalSystem& b, double t);

/// One effective collapse: branch i with probability p_i, by inverse CDF over
/// the branch order with a generator seeded by `seed`.
Index sample_collapse(const OutcomeDistribution& dist, std::uint64_t seed);

/// `count` independent collapses drawn from one generator stream.
std::vector<Index> sample_collapses(const OutcomeDistribution& dist, std::uint64_t seed, std::size_t count);

}  // namespace nhm
