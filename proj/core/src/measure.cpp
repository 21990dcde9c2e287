#include "nhm/measure.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <ostream>
#include <string>
#include <thread>

#include <spdlog/spdlog.h>

#include "nhm/csv.hpp"
#include "nhm/errors.hpp"
#include "nhm/linalg.hpp"
#include "nhm/twostate.hpp"

namespace nhm {

namespace {

struct AxisLayout {
    Index outer = 1;   // product of sizes before the axis
    Index length = 1;  // size of the axis
    Index stride = 1;  // product of sizes after the axis
};

AxisLayout layout(const JointState& joint, std::size_t axis) {
    if (axis >= joint.axes.size()) throw IndexOutOfRange("pointer axis out of range");
    AxisLayout l;
    for (std::size_t b = 0; b < joint.axes.size(); ++b) {
        const Index n = joint.axes[b].size();
        if (b < axis) l.outer *= n;
        if (b == axis) l.length = n;
        if (b > axis) l.stride *= n;
    }
    return l;
}

double measure_volume(const JointState& joint) {
    double v = 1.0;
    for (const auto& g : joint.axes) v *= g.dp();
    return v;
}

// Position amplitudes of every fiber along `axis`: column f of the result
// holds psi(Q_j) for one (system component, other-momenta) combination.
Matrix fibers_in_position(const JointState& joint, std::size_t axis) {
    const AxisLayout l = layout(joint, axis);
    const Index fibers = joint.system_dim() * l.outer * l.stride;
    Matrix v(l.length, fibers);
    Index f = 0;
    for (Index r = 0; r < joint.system_dim(); ++r)
        for (Index o = 0; o < l.outer; ++o)
            for (Index i = 0; i < l.stride; ++i, ++f)
                for (Index k = 0; k < l.length; ++k) v(k, f) = joint.amplitudes(r, (o * l.length + k) * l.stride + i);
    return joint.axes[axis].position_transform() * v;
}

Index dominant(const Vector& weights) {
    Index best = 0;
    for (Index i = 1; i < weights.size(); ++i)
        if (std::norm(weights(i)) > std::norm(weights(best))) best = i;
    return best;
}

void fill_branch_quality(const JointState& joint, const Vector& expected_unit, MeasurementOutcome& out) {
    double total = 0.0, along = 0.0, rest = 0.0;
    for (Index c = 0; c < joint.samples(); ++c) {
        const auto col = joint.amplitudes.col(c);
        const Complex proj = expected_unit.dot(col);
        total += col.squaredNorm();
        along += std::norm(proj);
        rest += (col - proj * expected_unit).squaredNorm();
    }
    out.fidelity = total > 0.0 ? along / total : 0.0;
    out.error_norm = total > 0.0 ? std::sqrt(rest / total) : 0.0;
}

template <class Fn>
void parallel_columns(Index count, int threads, Fn&& fn) {
    const int workers = std::max(1, std::min<int>(threads, static_cast<int>(count)));
    if (workers == 1) {
        for (Index c = 0; c < count; ++c) fn(c);
        return;
    }
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    std::vector<std::thread> pool;
    const Index chunk = (count + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                const Index lo = w * chunk, hi = std::min(count, lo + chunk);
                for (Index c = lo; c < hi; ++c) fn(c);
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace

double JointState::norm_squared() const { return amplitudes.squaredNorm() * measure_volume(*this); }

double JointState::momentum(std::size_t axis, Index c) const {
    const AxisLayout l = layout(*this, axis);
    const Index k = (c / l.stride) % l.length;
    return axes[axis].p(static_cast<int>(k));
}

JointState make_joint_state(const StateVector& phi, std::span<const PointerState> pointers) {
    if (pointers.empty()) throw InvalidArgument("at least one pointer is required");
    JointState joint;
    Index total = 1;
    for (const auto& p : pointers) {
        joint.axes.push_back(p.grid());
        total *= p.grid().size();
    }
    joint.amplitudes.resize(phi.dim(), total);
    for (Index c = 0; c < total; ++c) {
        Complex amp(1.0, 0.0);
        Index rem = c;
        for (std::size_t a = pointers.size(); a-- > 0;) {
            const Index n = pointers[a].grid().size();
            amp *= pointers[a].momentum_amplitudes()(rem % n);
            rem /= n;
        }
        joint.amplitudes.col(c) = amp * phi.amplitudes();
    }
    return joint;
}

RealVector position_density(const JointState& joint, std::size_t axis) {
    const Matrix psi = fibers_in_position(joint, axis);
    // The other axes contribute their dP measure to the marginal.
    double other = 1.0;
    for (std::size_t b = 0; b < joint.axes.size(); ++b)
        if (b != axis) other *= joint.axes[b].dp();
    return psi.cwiseAbs2().rowwise().sum() * other;
}

double mean_position(const JointState& joint, std::size_t axis) {
    const RealVector dens = position_density(joint, axis);
    const MomentumGrid& g = joint.axes[axis];
    double num = 0.0, den = 0.0;
    for (int j = 0; j < g.size(); ++j) {
        num += g.q(j) * dens(j);
        den += dens(j);
    }
    if (den == 0.0) throw NumericalError("pointer density vanishes");
    return num / den;
}

double mean_momentum(const JointState& joint, std::size_t axis) {
    double num = 0.0, den = 0.0;
    for (Index c = 0; c < joint.samples(); ++c) {
        const double w = joint.amplitudes.col(c).squaredNorm();
        num += joint.momentum(axis, c) * w;
        den += w;
    }
    if (den == 0.0) throw NumericalError("pointer density vanishes");
    return num / den;
}

BornStatistics born_statistics(const StateVector& phi, const Operator& a) {
    if (phi.dim() != a.dim()) throw DimensionMismatch("born_statistics: dimension mismatch");
    if (!a.is_hermitian(1e-10)) throw NonHermitianObservable("ideal measurement requires a Hermitian observable");
    Eigen::SelfAdjointEigenSolver<Matrix> eig(a.matrix());
    const Vector c = eig.eigenvectors().adjoint() * phi.amplitudes();
    BornStatistics s;
    s.eigenvalues = eig.eigenvalues();
    auto& d = s.distribution;
    double total = 0.0;
    for (Index n = 0; n < c.size(); ++n) {
        d.branches.push_back(n);
        d.weights.push_back(std::norm(c(n)));
        d.log_weights.push_back(std::log(std::norm(c(n))));
        total += d.weights.back();
    }
    if (total == 0.0) throw AllWeightsZero("born_statistics: zero input state");
    d.total_weight = total;
    for (double w : d.weights) d.probabilities.push_back(w / total);
    return s;
}

ImpulsiveResult impulsive_measure(const StateVector& phi, const Operator& a, const PointerState& pointer) {
    if (phi.dim() != a.dim()) throw DimensionMismatch("impulsive_measure: dimension mismatch");
    if (!a.is_hermitian(1e-10)) {
        spdlog::warn("impulsive_measure: refusing to measure a non-Hermitian observable");
        throw NonHermitianObservable("impulsive measurement requires a Hermitian observable");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(a.matrix());
    const Matrix& vecs = eig.eigenvectors();
    const RealVector& vals = eig.eigenvalues();
    const Vector coeff = vecs.adjoint() * phi.amplitudes();

    const std::array<PointerState, 1> ptrs{pointer};
    ImpulsiveResult r{make_joint_state(phi, ptrs), {}};
    const JointState initial = r.joint;
    const MomentumGrid& g = pointer.grid();
    for (int k = 0; k < g.size(); ++k) {
        Vector phased(coeff.size());
        for (Index n = 0; n < coeff.size(); ++n) phased(n) = coeff(n) * std::exp(Complex(0.0, -g.p(k) * vals(n)));
        r.joint.amplitudes.col(k) = pointer.momentum_amplitudes()(k) * (vecs * phased);
    }

    auto& out = r.outcome;
    out.kind = MeasurementKind::Impulsive;
    out.shift_q = mean_position(r.joint, 0) - mean_position(initial, 0);
    out.shift_p = mean_momentum(r.joint, 0) - mean_momentum(initial, 0);
    const Index b = dominant(coeff);
    out.branch = b;
    out.expected_value = vals(b);
    fill_branch_quality(r.joint, vecs.col(b), out);
    out.postselection_weight = r.joint.norm_squared() / initial.norm_squared();
    return r;
}

namespace {

double coupling_bound(const Operator& h_eff, std::span<const Operator> observables,
                      std::span<const PointerState> pointers, const Envelope& env) {
    double bound = spectral_norm(h_eff.matrix());
    for (std::size_t a = 0; a < observables.size(); ++a)
        bound += env.plateau_height() * pointers[a].grid().p_max() * spectral_norm(observables[a].matrix());
    return bound;
}

}  // namespace

int auto_steps(const Operator& h_eff, std::span<const Operator> observables, std::span<const PointerState> pointers,
               const Envelope& env, double max_step_norm) {
    const double bound = coupling_bound(h_eff, observables, pointers, env);
    return std::max(1, static_cast<int>(std::ceil(env.duration() * bound / max_step_norm)));
}

SimultaneousResult simultaneous_adiabatic(const Operator& h_eff, std::span<const Operator> observables,
                                          const StateVector& phi, std::span<const PointerState> pointers,
                                          const Envelope& env, const AdiabaticOptions& opts) {
    if (observables.empty()) throw InvalidArgument("at least one observable is required");
    if (observables.size() > 3) throw GridTooLarge("at most three simultaneous observables are supported");
    if (observables.size() != pointers.size()) throw DimensionMismatch("one pointer per observable is required");
    if (phi.dim() != h_eff.dim()) throw DimensionMismatch("initial state does not match H_eff");
    Index grid_total = 1;
    for (const auto& p : pointers) grid_total *= p.grid().size();
    if (grid_total > opts.max_grid_samples)
        throw GridTooLarge("product momentum grid has " + std::to_string(grid_total) + " samples, limit is " +
                           std::to_string(opts.max_grid_samples));
    for (const auto& a : observables)
        if (a.dim() != h_eff.dim()) throw DimensionMismatch("observable does not match H_eff");

    SimultaneousResult r{make_joint_state(phi, pointers), {}, decompose(h_eff), 0};
    const JointState initial = r.joint;

    const double bound = coupling_bound(h_eff, observables, pointers, env);
    int steps = opts.steps;
    if (steps <= 0) {
        steps = auto_steps(h_eff, observables, pointers, env, opts.max_step_norm);
    } else if (bound * env.duration() / steps > opts.max_step_norm * (1.0 + 1e-12)) {
        throw InvalidArgument("adiabatic_measure: " + std::to_string(steps) +
                              " slices violate ||H|| dt <= " + std::to_string(opts.max_step_norm));
    }
    r.steps = steps;

    const double dt = env.duration() / steps;
    std::vector<double> g(static_cast<std::size_t>(steps));
    std::vector<char> plateau(static_cast<std::size_t>(steps));
    for (int s = 0; s < steps; ++s) {
        const double a = s * dt, b = (s + 1 == steps) ? env.duration() : (s + 1) * dt;
        plateau[static_cast<std::size_t>(s)] = env.in_plateau(a, b);
        g[static_cast<std::size_t>(s)] = env.slice_average(a, b);
    }

    const Matrix& h = h_eff.matrix();
    parallel_columns(r.joint.samples(), opts.threads, [&](Index c) {
        Matrix coupling = Matrix::Zero(h.rows(), h.cols());
        for (std::size_t a = 0; a < observables.size(); ++a)
            coupling += initial.momentum(a, c) * observables[a].matrix();
        Vector chi = initial.amplitudes.col(c);
        Matrix u_plateau;
        for (int s = 0; s < steps; ++s) {
            const auto si = static_cast<std::size_t>(s);
            if (plateau[si]) {
                if (u_plateau.size() == 0) u_plateau = propagator(h + g[si] * coupling, dt);
                chi = u_plateau * chi;
            } else {
                chi = propagator(h + g[si] * coupling, dt) * chi;
            }
        }
        r.joint.amplitudes.col(c) = chi;
    });

    const Vector alpha = decompose_ket(phi, r.spectrum);
    const Index b = dominant(alpha);
    const TwoStateVector tsv = two_state_from_branch(r.spectrum, b);
    MeasurementOutcome common;
    common.kind = MeasurementKind::Adiabatic;
    common.branch = b;
    fill_branch_quality(r.joint, r.spectrum.kets.col(b), common);
    common.postselection_weight = r.joint.norm_squared() / initial.norm_squared();
    common.adiabaticity_violated = common.fidelity < opts.fidelity_threshold;
    if (common.adiabaticity_violated)
        spdlog::warn("adiabatic measurement: branch fidelity {} below threshold {}", common.fidelity,
                     opts.fidelity_threshold);

    for (std::size_t a = 0; a < observables.size(); ++a) {
        MeasurementOutcome out = common;
        out.shift_q = mean_position(r.joint, a) - mean_position(initial, a);
        out.shift_p = mean_momentum(r.joint, a) - mean_momentum(initial, a);
        out.expected_value = weak_value(tsv, observables[a]);
        r.outcomes.push_back(out);
    }
    return r;
}

AdiabaticResult adiabatic_measure(const Operator& h_eff, const Operator& a, const StateVector& phi,
                                  const PointerState& pointer, const Envelope& env, const AdiabaticOptions& opts) {
    const std::array<Operator, 1> obs{a};
    const std::array<PointerState, 1> ptrs{pointer};
    SimultaneousResult s = simultaneous_adiabatic(h_eff, obs, phi, ptrs, env, opts);
    return {std::move(s.joint), s.outcomes.front(), std::move(s.spectrum), s.steps};
}

std::vector<ConvergenceRow> adiabatic_convergence_study(const AdiabaticSetup& setup,
                                                        std::span<const double> durations) {
    for (std::size_t i = 1; i < durations.size(); ++i)
        if (!(durations[i] > durations[i - 1])) throw InvalidArgument("convergence study: T list must increase");
    std::vector<ConvergenceRow> rows;
    for (double t : durations) {
        const AdiabaticResult r = adiabatic_measure(setup.h_eff, setup.observable, setup.initial, setup.pointer,
                                                    Envelope(t, setup.ramp_fraction), setup.options);
        ConvergenceRow row;
        row.duration = t;
        row.shift_q = r.outcome.shift_q;
        row.shift_p = r.outcome.shift_p;
        row.error_norm = r.outcome.error_norm;
        row.fidelity = r.outcome.fidelity;
        row.deviation = std::abs(r.outcome.shift_q - r.outcome.expected_value.real());
        rows.push_back(row);
    }
    return rows;
}

void write_convergence_csv(std::ostream& out, std::span<const ConvergenceRow> rows) {
    CsvWriter csv(out, {"T", "shift_q", "shift_p", "error_norm", "fidelity"});
    for (const auto& r : rows) csv.row(std::vector<double>{r.duration, r.shift_q, r.shift_p, r.error_norm, r.fidelity});
}

double branch_pointer_overlap(const PointerState& pointer, Complex w_i, Complex w_j) {
    const MomentumGrid& g = pointer.grid();
    Complex cross(0.0, 0.0);
    double ni = 0.0, nj = 0.0;
    for (int k = 0; k < g.size(); ++k) {
        const Complex base = pointer.momentum_amplitudes()(k);
        const Complex a = base * std::exp(Complex(0.0, -g.p(k)) * w_i);
        const Complex b = base * std::exp(Complex(0.0, -g.p(k)) * w_j);
        cross += std::conj(a) * b;
        ni += std::norm(a);
        nj += std::norm(b);
    }
    return std::abs(cross) / std::sqrt(ni * nj);
}

void write_joint_pointer_csv(std::ostream& out, const JointState& joint, const StateVector& system_state) {
    if (joint.axes.size() != 1) throw InvalidArgument("pointer export supports a single pointer axis");
    if (system_state.dim() != joint.system_dim()) throw DimensionMismatch("pointer export: system state dimension");
    const MomentumGrid& g = joint.axes.front();
    const Vector e = system_state.normalized().amplitudes();
    const Vector cond_p = (e.adjoint() * joint.amplitudes).transpose();
    const Vector cond_q = g.to_position(cond_p);
    const RealVector dens_q = position_density(joint, 0);
    CsvWriter csv(out, {"q", "prob_q", "re_q", "im_q", "p", "prob_p", "re_p", "im_p"});
    for (int j = 0; j < g.size(); ++j) {
        csv.row(std::vector<double>{g.q(j), dens_q(j), cond_q(j).real(), cond_q(j).imag(), g.p(j),
                                    joint.amplitudes.col(j).squaredNorm(), cond_p(j).real(), cond_p(j).imag()});
    }
}

}  // namespace nhm
