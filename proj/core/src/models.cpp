#include "nhm/models.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <spdlog/spdlog.h>

#include "nhm/envelope.hpp"
#include "nhm/errors.hpp"
#include "nhm/linalg.hpp"
#include "nhm/twostate.hpp"

namespace nhm {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

// Spin model on the product space truncated to the top `levels` m_x states,
// laid out large spin first.
struct Space {
    Index levels = 0;
    Matrix h0;       // lambda S.sigma on the (truncated) space
    Matrix sigma_x;  // 1 (x) sigma_x
    Vector post;     // sqrt(C(2N, k)), i.e. <S_y=N| divided by <S_y=N|S_x=N>
};

// sqrt(C(2N, k)) for k < count, built by the ratio recursion so that the
// first entries stay exact.
RealVector sqrt_binomials(double n, Index count) {
    RealVector c(count);
    c(0) = 1.0;
    const double two_n = 2.0 * n;
    for (Index k = 1; k < count; ++k) c(k) = c(k - 1) * std::sqrt((two_n - double(k) + 1.0) / double(k));
    return c;
}

Space make_space(double n, double lambda, Index levels) {
    const SpinOperators s = spin_operators_x_basis(n);
    Space sp;
    sp.levels = levels;
    const Matrix sx = s.x.matrix().topLeftCorner(levels, levels);
    const Matrix sy = s.y.matrix().topLeftCorner(levels, levels);
    const Matrix sz = s.z.matrix().topLeftCorner(levels, levels);
    sp.h0 = lambda * (kron(sx, pauli_x().matrix()) + kron(sy, pauli_y().matrix()) + kron(sz, pauli_z().matrix()));
    sp.sigma_x = kron(Matrix::Identity(levels, levels), pauli_x().matrix());
    sp.post = sqrt_binomials(n, levels).cast<Complex>();
    return sp;
}

// Three m_x levels hold the J_x = N+1/2, N-1/2, N-3/2 sectors exactly: every
// retained matrix element of S.sigma conserves J_x, and the N-5/2 state that
// loses its partner is never populated from these sectors.
Index restricted_levels(double n) { return std::min<Index>(3, spin_dimension(n)); }

Vector initial_state(Index levels, const Vector& small) {
    Vector v = Vector::Zero(2 * levels);
    v(0) = small(0);
    v(1) = small(1);
    return v;
}

Vector postselect(const Space& sp, const Vector& psi) {
    Vector chi = Vector::Zero(2);
    for (Index k = 0; k < sp.levels; ++k) {
        chi(0) += sp.post(k) * psi(2 * k);
        chi(1) += sp.post(k) * psi(2 * k + 1);
    }
    return chi;
}

bool wants_cross_check(const ExactSpinOptions& opts, double n) {
    return opts.mode == SectorMode::Auto && n <= opts.cross_check_max_n && restricted_levels(n) < spin_dimension(n);
}

Index levels_for(const ExactSpinOptions& opts, double n) {
    return opts.mode == SectorMode::Full ? spin_dimension(n) : restricted_levels(n);
}

double transition_in(const Space& sp, double total_time, double t) {
    const Vector up = spin_up(Axis::Y).amplitudes();
    const Vector down = spin_down(Axis::Y).amplitudes();
    const Vector psi_t = propagator(sp.h0, t) * initial_state(sp.levels, down);
    const Matrix back = propagator(sp.h0, total_time - t);

    auto branch = [&](const Vector& s) {
        const Matrix proj = kron(Matrix::Identity(sp.levels, sp.levels), s * s.adjoint());
        return postselect(sp, back * (proj * psi_t)).squaredNorm();
    };
    const double p_up = branch(up);
    const double p_down = branch(down);
    const double total = p_up + p_down;
    if (!(total > 0.0)) throw OrthogonalStates("exact_transition_probability: post-selection has zero probability");
    return p_up / total;
}

// Time-sliced evolution under h0 + g(t) P sigma_x from `psi`.
Vector evolve_sliced(const Matrix& h0, const Matrix& coupling, const Vector& psi, const Envelope& env,
                     double momentum, int steps) {
    const double dt = env.duration() / steps;
    Vector state = psi;
    Matrix plateau;
    bool have_plateau = false;
    for (int k = 0; k < steps; ++k) {
        const double a = k * dt;
        const double b = (k + 1 == steps) ? env.duration() : (k + 1) * dt;
        if (env.in_plateau(a, b)) {
            if (!have_plateau) {
                plateau = propagator(h0 + (env.plateau_height() * momentum) * coupling, dt);
                have_plateau = true;
            }
            state = plateau * state;
        } else {
            state = propagator(h0 + (env.slice_average(a, b) * momentum) * coupling, b - a) * state;
        }
    }
    return state;
}

Vector exact_chi(const Space& sp, double total_time, double momentum, int steps, double ramp) {
    const Envelope env(total_time, ramp);
    const Vector psi0 = initial_state(sp.levels, spin_down(Axis::Y).amplitudes());
    return postselect(sp, evolve_sliced(sp.h0, sp.sigma_x, psi0, env, momentum, steps));
}

}  // namespace

Operator pauli(Axis axis) {
    switch (axis) {
    case Axis::X: return Operator{{0.0, 1.0}, {1.0, 0.0}};
    case Axis::Y: return Operator{{0.0, -kI}, {kI, 0.0}};
    case Axis::Z: break;
    }
    return Operator{{1.0, 0.0}, {0.0, -1.0}};
}

Operator pauli_x() { return pauli(Axis::X); }
Operator pauli_y() { return pauli(Axis::Y); }
Operator pauli_z() { return pauli(Axis::Z); }

StateVector spin_up(Axis axis) {
    switch (axis) {
    case Axis::X: return StateVector{kInvSqrt2, kInvSqrt2};
    case Axis::Y: return StateVector{kInvSqrt2, kI * kInvSqrt2};
    case Axis::Z: break;
    }
    return StateVector{1.0, 0.0};
}

StateVector spin_down(Axis axis) {
    switch (axis) {
    case Axis::X: return StateVector{kInvSqrt2, -kInvSqrt2};
    case Axis::Y: return StateVector{kInvSqrt2, -kI * kInvSqrt2};
    case Axis::Z: break;
    }
    return StateVector{0.0, 1.0};
}

Index spin_dimension(double n) {
    const double two_n = 2.0 * n;
    if (!std::isfinite(n) || two_n < 1.0 || two_n != std::floor(two_n) || two_n > 1e6) {
        std::ostringstream msg;
        msg << "spin N = " << n << " is not a positive multiple of 1/2";
        throw InvalidSpin(msg.str());
    }
    return static_cast<Index>(two_n) + 1;
}

SpinOperators spin_operators(double n) {
    const Index dim = spin_dimension(n);
    Matrix sz = Matrix::Zero(dim, dim);
    Matrix sp = Matrix::Zero(dim, dim);
    for (Index k = 0; k < dim; ++k) {
        const double m = n - double(k);
        sz(k, k) = m;
        // S+ |m> = sqrt(N(N+1) - m(m+1)) |m+1>, and m+1 sits at row k-1
        if (k > 0) sp(k - 1, k) = std::sqrt(n * (n + 1.0) - m * (m + 1.0));
    }
    const Matrix sm = sp.adjoint();
    Matrix sx = 0.5 * (sp + sm);
    Matrix sy = (sp - sm) / Complex(0.0, 2.0);
    return {Operator(std::move(sx)), Operator(std::move(sy)), Operator(std::move(sz))};
}

SpinOperators spin_operators_x_basis(double n) {
    SpinOperators s = spin_operators(n);
    // cyclic relabel keeps [S_x, S_y] = i S_z
    return {s.z, s.x, s.y};
}

SpinModel build_spin_model(double n, double lambda) {
    const Index dim = spin_dimension(n);
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidArgument("build_spin_model: lambda must be positive");

    SpinModel m{.n = n,
                .lambda = lambda,
                .large = spin_operators_x_basis(n),
                .s_full_x = Operator::zero(1),
                .s_full_y = Operator::zero(1),
                .s_full_z = Operator::zero(1),
                .sigma_full_x = Operator::zero(1),
                .sigma_full_y = Operator::zero(1),
                .sigma_full_z = Operator::zero(1),
                .h0 = Operator::zero(1),
                .pre = StateVector{1.0},
                .post = StateVector{1.0},
                .warnings = {}};
    const Matrix id_small = Matrix::Identity(2, 2);
    const Matrix id_large = Matrix::Identity(dim, dim);
    m.s_full_x = Operator(kron(m.large.x.matrix(), id_small));
    m.s_full_y = Operator(kron(m.large.y.matrix(), id_small));
    m.s_full_z = Operator(kron(m.large.z.matrix(), id_small));
    m.sigma_full_x = Operator(kron(id_large, pauli_x().matrix()));
    m.sigma_full_y = Operator(kron(id_large, pauli_y().matrix()));
    m.sigma_full_z = Operator(kron(id_large, pauli_z().matrix()));
    m.h0 = Operator(lambda * (m.s_full_x * m.sigma_full_x + m.s_full_y * m.sigma_full_y + m.s_full_z * m.sigma_full_z)
                                 .matrix());

    Vector pre = Vector::Zero(dim);
    pre(0) = 1.0;
    m.pre = StateVector(std::move(pre));

    // |S_y = N> in the x basis: sqrt(C(2N,k)) / 2^N, all real positive.
    // Log form so that large N does not underflow the prefactor.
    Vector post(dim);
    for (Index k = 0; k < dim; ++k) {
        const double kk = double(k);
        const double log_c = std::lgamma(2.0 * n + 1.0) - std::lgamma(kk + 1.0) - std::lgamma(2.0 * n - kk + 1.0);
        post(k) = std::exp(0.5 * log_c - n * std::log(2.0));
    }
    m.post = StateVector(std::move(post));

    if (lambda >= 1.0) m.warnings.emplace_back("lambda >= 1: outside the small-coupling regime");
    if (lambda * n <= 1.0) m.warnings.emplace_back("lambda*N <= 1: effective Hamiltonian regime not reached");
    for (const auto& w : m.warnings) spdlog::warn("build_spin_model(N={}, lambda={}): {}", n, lambda, w);
    return m;
}

std::array<Complex, 3> spin_weak_values(const SpinModel& model) {
    // <S_y=N|S_x=N> = 2^-N is known in closed form to be nonzero, so the
    // generic cutoff is not applied.
    const TwoStateVector tsv(model.post, model.pre);
    const WeakValueOptions opts{.denom_tol = 0.0};
    return {weak_value(tsv, model.large.x, opts), weak_value(tsv, model.large.y, opts),
            weak_value(tsv, model.large.z, opts)};
}

Operator effective_hamiltonian(const SpinModel& model) {
    const auto sw = spin_weak_values(model);
    return Operator(model.lambda *
                    (sw[0] * pauli_x().matrix() + sw[1] * pauli_y().matrix() + sw[2] * pauli_z().matrix()));
}

double exact_transition_probability(double n, double lambda, double total_time, double t,
                                    const ExactSpinOptions& opts) {
    spin_dimension(n);
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw InvalidArgument("exact_transition_probability: lambda must be non-negative");
    if (!(total_time > 0.0) || !(t >= 0.0) || t > total_time)
        throw InvalidArgument("exact_transition_probability: need 0 <= t <= T and T > 0");

    const double p = transition_in(make_space(n, lambda, levels_for(opts, n)), total_time, t);
    if (wants_cross_check(opts, n)) {
        const double full = transition_in(make_space(n, lambda, spin_dimension(n)), total_time, t);
        if (std::abs(full - p) > opts.cross_check_tol) {
            std::ostringstream msg;
            msg << "exact_transition_probability: restricted " << p << " vs full " << full << " at N = " << n;
            throw SectorMismatch(msg.str());
        }
    }
    return p;
}

ExactAdiabaticCheck exact_adiabatic_check(double n, double lambda, double total_time, double momentum, int steps,
                                          const ExactSpinOptions& opts) {
    spin_dimension(n);
    if (!(lambda > 0.0)) throw InvalidArgument("exact_adiabatic_check: lambda must be positive");
    if (!(total_time > 0.0)) throw InvalidArgument("exact_adiabatic_check: T must be positive");
    if (steps < 1) throw InvalidArgument("exact_adiabatic_check: steps must be >= 1");
    if (!std::isfinite(momentum)) throw InvalidArgument("exact_adiabatic_check: P must be finite");

    ExactAdiabaticCheck r;
    r.exact = exact_chi(make_space(n, lambda, levels_for(opts, n)), total_time, momentum, steps, opts.ramp_fraction);
    if (wants_cross_check(opts, n)) {
        const Vector full =
            exact_chi(make_space(n, lambda, spin_dimension(n)), total_time, momentum, steps, opts.ramp_fraction);
        r.cross_checked = true;
        r.sector_discrepancy = (full - r.exact).norm();
        if (r.sector_discrepancy > opts.cross_check_tol) {
            std::ostringstream msg;
            msg << "exact_adiabatic_check: restricted and full evolutions differ by " << r.sector_discrepancy
                << " at N = " << n;
            throw SectorMismatch(msg.str());
        }
    }

    // H_eff = lambda N (sigma_x + sigma_y + i sigma_z), written out to avoid
    // building the full model just for its weak values.
    const Matrix h_eff =
        (lambda * n) * (pauli_x().matrix() + pauli_y().matrix() + kI * pauli_z().matrix());
    const Vector down = spin_down(Axis::Y).amplitudes();
    const Vector up = spin_up(Axis::Y).amplitudes();
    r.effective =
        evolve_sliced(h_eff, pauli_x().matrix(), down, Envelope(total_time, opts.ramp_fraction), momentum, steps);
    // branch eigenvalue -lambda N, (sigma_x)_w = -1
    r.ideal = std::exp(kI * (lambda * n * total_time + momentum)) * down;

    const Vector delta = r.exact - r.effective;
    r.wrong_direction_norm = std::abs(down.dot(delta));
    r.spin_flip_norm = std::abs(up.dot(delta));
    r.total_error_norm = delta.norm();
    r.exact_flip_amplitude = std::abs(up.dot(r.exact));
    return r;
}

double spin_pointer_shift(double n, double lambda, double total_time, int steps, double h,
                          const ExactSpinOptions& opts) {
    if (!(h > 0.0)) throw InvalidArgument("spin_pointer_shift: h must be positive");
    const Vector down = spin_down(Axis::Y).amplitudes();
    const Complex plus = down.dot(exact_adiabatic_check(n, lambda, total_time, h, steps, opts).exact);
    const Complex minus = down.dot(exact_adiabatic_check(n, lambda, total_time, -h, steps, opts).exact);
    // amplitude ~ e^{-i P shift}
    return -std::arg(plus / minus) / (2.0 * h);
}

Complex KaonModel::short_long_overlap() const { return k_short.inner(k_long); }

double KaonModel::left_right_defect() const { return 1.0 - std::abs(k_long_bra.inner(k_long)); }

KaonModel build_kaon_like(Complex epsilon, Complex omega_long, Complex omega_short) {
    for (Complex w : {epsilon, omega_long, omega_short})
        if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) throw NonFinite("build_kaon_like: non-finite input");
    if (omega_long.imag() > 0.0 || omega_short.imag() > 0.0)
        throw InvalidArgument("build_kaon_like: Im(omega) must be <= 0 for decaying states");
    if (std::abs(1.0 + epsilon) < 1e-12) throw DegenerateSpectrum("build_kaon_like: epsilon = -1 is singular");
    const Complex ratio = (1.0 - epsilon) / (1.0 + epsilon);
    if (std::abs(ratio) < 1e-12) throw DegenerateSpectrum("build_kaon_like: epsilon = 1 makes the kets parallel");
    if (std::abs(omega_long - omega_short) < 1e-12 * std::max(1.0, std::abs(omega_long)))
        throw DegenerateSpectrum("build_kaon_like: omega_L equals omega_S");

    Matrix kets(2, 2);
    kets << 1.0, 1.0, ratio, -ratio;
    kets.col(0).normalize();
    kets.col(1).normalize();
    // dual basis: rows of the inverse are the bras
    const Matrix inv = kets.inverse();
    BiorthogonalSystem seed;
    seed.eigenvalues = Vector(2);
    seed.eigenvalues << omega_long, omega_short;
    seed.kets = kets;
    seed.bras = inv.adjoint();

    KaonModel k{.epsilon = epsilon,
                .omega_long = omega_long,
                .omega_short = omega_short,
                .h_eff = reconstruct(seed),
                .spectrum = {},
                .long_branch = 0,
                .short_branch = 1,
                .k_long = StateVector{1.0},
                .k_short = StateVector{1.0},
                .k_long_bra = StateVector{1.0},
                .k_short_bra = StateVector{1.0}};
    k.spectrum = decompose(k.h_eff);
    k.long_branch = nearest_eigenvalue(k.spectrum.eigenvalues, omega_long);
    k.short_branch = 1 - k.long_branch;
    k.k_long = k.spectrum.ket(k.long_branch);
    k.k_short = k.spectrum.ket(k.short_branch);
    k.k_long_bra = k.spectrum.bra(k.long_branch).normalized();
    k.k_short_bra = k.spectrum.bra(k.short_branch).normalized();
    return k;
}

}  // namespace nhm
