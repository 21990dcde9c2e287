#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "nhm/envelope.hpp"
#include "nhm/pointer.hpp"
#include "nhm/propagate.hpp"
#include "nhm/spectral.hpp"
#include "nhm/types.hpp"

namespace nhm {

/// System (x) pointer(s) state, resolved by pointer momentum. Column c of
/// `amplitudes` is the (unnormalized) system vector at the momentum
/// multi-index obtained by unflattening c over `axes`, last axis fastest.
struct JointState {
    std::vector<MomentumGrid> axes;
    Matrix amplitudes;

    [[nodiscard]] Index system_dim() const noexcept { return amplitudes.rows(); }
    [[nodiscard]] Index samples() const noexcept { return amplitudes.cols(); }
    /// sum_c ||col_c||^2 prod_a dP_a
    [[nodiscard]] double norm_squared() const;
    /// Momentum of pointer `axis` at flattened column c.
    [[nodiscard]] double momentum(std::size_t axis, Index c) const;
};

/// Product state |Phi> (x) pointers.
JointState make_joint_state(const StateVector& phi, std::span<const PointerState> pointers);

/// <Q_axis>, from the position representation of each system component
/// along that axis (discrete transform of MomentumGrid).
double mean_position(const JointState& joint, std::size_t axis);
/// <P_axis>
double mean_momentum(const JointState& joint, std::size_t axis);
/// Marginal position density of pointer `axis`, summed over system components
/// and the other pointers; integrates to norm_squared() with weight dQ.
RealVector position_density(const JointState& joint, std::size_t axis);

enum class MeasurementKind { Impulsive, Adiabatic };

struct MeasurementOutcome {
    MeasurementKind kind = MeasurementKind::Impulsive;
    double shift_q = 0.0;  // <Q> final - initial
    double shift_p = 0.0;  // <P> final - initial
    std::optional<Index> branch;
    /// Weight on the expected branch state, sum_P |<e|Psi_P>|^2 / sum_P ||Psi_P||^2.
    double fidelity = 0.0;
    /// sqrt of the remaining weight, so fidelity + error_norm^2 = 1.
    double error_norm = 0.0;
    /// ||joint||^2 final / initial: the relative post-selection weight.
    double postselection_weight = 1.0;
    /// Value the pointer should read: eigenvalue (impulsive) or branch weak value (adiabatic).
    Complex expected_value{0.0, 0.0};
    bool adiabaticity_violated = false;
};

struct ImpulsiveResult {
    JointState joint;
    MeasurementOutcome outcome;
};

/// Von Neumann measurement exp(-i P A) of a Hermitian observable. The branch
/// is the eigenvector of A with the largest Born weight (eigenvalues
/// ascending). Throws NonHermitianObservable for non-Hermitian A.
ImpulsiveResult impulsive_measure(const StateVector& phi, const Operator& a, const PointerState& pointer);

/// Born statistics of an ideal measurement of A: eigenvalues ascending and
/// the matching distribution.
struct BornStatistics {
    RealVector eigenvalues;
    OutcomeDistribution distribution;
};
BornStatistics born_statistics(const StateVector& phi, const Operator& a);

struct AdiabaticOptions {
    /// Time slices; 0 picks the smallest count with ||H_slice|| dt <= max_step_norm.
    int steps = 0;
    double max_step_norm = 0.1;
    double fidelity_threshold = 0.99;
    /// Worker threads over momentum samples. Results do not depend on it.
    int threads = 1;
    /// Product-grid size limit for simultaneous measurements.
    Index max_grid_samples = Index{1} << 22;
};

struct AdiabaticResult {
    JointState joint;
    MeasurementOutcome outcome;
    BiorthogonalSystem spectrum;
    int steps = 0;
};

/// Adiabatic measurement: for every pointer momentum P the system evolves
/// under H_eff + g(t) P A, piecewise constant over `steps` slices with the
/// exact slice average of g. The branch is the eigenket of H_eff with the
/// largest |alpha_i|^2 in the input.
AdiabaticResult adiabatic_measure(const Operator& h_eff, const Operator& a, const StateVector& phi,
                                  const PointerState& pointer, const Envelope& env,
                                  const AdiabaticOptions& opts = {});

struct SimultaneousResult {
    JointState joint;
    std::vector<MeasurementOutcome> outcomes;  // one per observable / pointer axis
    BiorthogonalSystem spectrum;
    int steps = 0;
};

/// Several pointers coupled at once through H_eff + g(t) sum_a P_a A_a on
/// the product momentum grid (at most three observables).
SimultaneousResult simultaneous_adiabatic(const Operator& h_eff, std::span<const Operator> observables,
                                          const StateVector& phi, std::span<const PointerState> pointers,
                                          const Envelope& env, const AdiabaticOptions& opts = {});

/// Steps that adiabatic_measure would pick for the given setup.
int auto_steps(const Operator& h_eff, std::span<const Operator> observables, std::span<const PointerState> pointers,
               const Envelope& env, double max_step_norm);

struct ConvergenceRow {
    double duration = 0.0;
    double shift_q = 0.0;
    double shift_p = 0.0;
    double error_norm = 0.0;
    double fidelity = 0.0;
    /// |shift_q - Re(expected weak value)|
    double deviation = 0.0;
};

struct AdiabaticSetup {
    Operator h_eff;
    Operator observable;
    StateVector initial;
    PointerState pointer;
    double ramp_fraction = 0.1;
    AdiabaticOptions options{};
};

/// Runs adiabatic_measure for each duration in `durations` (increasing).
std::vector<ConvergenceRow> adiabatic_convergence_study(const AdiabaticSetup& setup,
                                                        std::span<const double> durations);

/// Columns: T, shift_q, shift_p, error_norm, fidelity.
void write_convergence_csv(std::ostream& out, std::span<const ConvergenceRow> rows);

/// |<pointer shifted by w_i | pointer shifted by w_j>| for complex shifts,
/// i.e. the size of the branch cross terms dropped from the outcome law.
double branch_pointer_overlap(const PointerState& pointer, Complex w_i, Complex w_j);

/// Position/momentum export of pointer `axis` after a measurement (single
/// pointer only): marginal densities plus the pointer amplitude conditional
/// on `system_state` (columns as write_pointer_csv).
void write_joint_pointer_csv(std::ostream& out, const JointState& joint, const StateVector& system_state);

}  // namespace nhm
