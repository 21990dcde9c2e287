#include "nhm/propagate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "nhm/csv.hpp"
#include "nhm/errors.hpp"
#include "nhm/linalg.hpp"
#include "nhm/random.hpp"

namespace nhm {

Vector decompose_ket(const StateVector& phi, const BiorthogonalSystem& b) {
    if (phi.dim() != b.kets.rows()) throw DimensionMismatch("decompose_ket: dimension mismatch");
    Vector alpha(b.dim());
    for (Index i = 0; i < b.dim(); ++i) alpha(i) = b.bras.col(i).dot(phi.amplitudes()) / b.overlap(i);
    return alpha;
}

Vector decompose_bra(const StateVector& psi, const BiorthogonalSystem& b) {
    if (psi.dim() != b.kets.rows()) throw DimensionMismatch("decompose_bra: dimension mismatch");
    // <Psi|phi_j> = beta_j <psi_j|phi_j>
    Vector beta(b.dim());
    for (Index j = 0; j < b.dim(); ++j) beta(j) = psi.amplitudes().dot(b.kets.col(j)) / b.overlap(j);
    return beta;
}

EvolutionResult evolve(const StateVector& phi, const Operator& h, double t, int samples, EvolutionMethod method) {
    if (phi.dim() != h.dim()) throw DimensionMismatch("evolve: state and Hamiltonian dimensions differ");
    if (!(t >= 0.0)) throw InvalidArgument("evolve: t must be >= 0");
    if (samples < 1) throw InvalidArgument("evolve: samples must be positive");

    EvolutionResult r;
    r.times.reserve(static_cast<std::size_t>(samples));
    if (samples == 1) {
        r.times.push_back(t);
    } else {
        for (int k = 0; k < samples; ++k) r.times.push_back(t * k / (samples - 1));
    }

    std::optional<BiorthogonalSystem> spectral;
    if (method != EvolutionMethod::MatrixExponential) {
        try {
            spectral = decompose(h);
        } catch (const DegenerateSpectrum&) {
            if (method == EvolutionMethod::Spectral) throw;
        }
    }

    Vector alpha;
    if (spectral) alpha = decompose_ket(phi, *spectral);
    for (double tk : r.times) {
        Vector state;
        if (spectral) {
            state = Vector::Zero(phi.dim());
            for (Index i = 0; i < spectral->dim(); ++i)
                state += alpha(i) * std::exp(Complex(0.0, -tk) * spectral->eigenvalues(i)) * spectral->kets.col(i);
        } else {
            state = propagator(h.matrix(), tk) * phi.amplitudes();
        }
        r.norms.push_back(state.squaredNorm());
        r.states.emplace_back(std::move(state));
    }
    return r;
}

void write_evolution_csv(std::ostream& out, const EvolutionResult& r) {
    std::vector<std::string> header{"t"};
    const Index d = r.states.empty() ? 0 : r.states.front().dim();
    for (Index i = 0; i < d; ++i) {
        header.push_back("re_" + std::to_string(i));
        header.push_back("im_" + std::to_string(i));
    }
    header.emplace_back("norm");
    CsvWriter csv(out, std::move(header));
    for (std::size_t k = 0; k < r.times.size(); ++k) {
        std::vector<double> row{r.times[k]};
        for (Index i = 0; i < d; ++i) {
            row.push_back(r.states[k][i].real());
            row.push_back(r.states[k][i].imag());
        }
        row.push_back(r.norms[k]);
        csv.row(row);
    }
}

OutcomeDistribution outcome_distribution(const Vector& alpha, const BiorthogonalSystem& b, double t) {
    if (alpha.size() != b.dim()) throw DimensionMismatch("outcome_distribution: alpha size mismatch");
    if (!(t >= 0.0)) throw InvalidArgument("outcome_distribution: T must be >= 0");

    OutcomeDistribution d;
    const auto n = static_cast<std::size_t>(b.dim());
    d.branches.resize(n);
    d.weights.resize(n);
    d.log_weights.resize(n);
    d.probabilities.resize(n);

    double log_max = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const auto idx = static_cast<Index>(i);
        d.branches[i] = idx;
        const double a2 = std::norm(alpha(idx));
        const double exponent = 2.0 * b.eigenvalues(idx).imag() * t;
        d.log_weights[i] = a2 > 0.0 ? std::log(a2) + exponent : -std::numeric_limits<double>::infinity();
        // Below -700 the direct product underflows; keep the log form only.
        d.weights[i] = a2 > 0.0 ? (exponent < -700.0 ? std::exp(d.log_weights[i]) : a2 * std::exp(exponent)) : 0.0;
        log_max = std::max(log_max, d.log_weights[i]);
    }
    if (!std::isfinite(log_max))
        throw AllWeightsZero("every branch weight vanishes: post-selection probability is zero");

    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        d.probabilities[i] = std::exp(d.log_weights[i] - log_max);
        sum += d.probabilities[i];
    }
    for (auto& p : d.probabilities) p /= sum;
    for (double w : d.weights) d.total_weight += w;
    return d;
}

namespace {

Index draw(const OutcomeDistribution& dist, Rng& rng) {
    const double u = uniform01(rng);
    double cdf = 0.0;
    for (std::size_t i = 0; i < dist.probabilities.size(); ++i) {
        cdf += dist.probabilities[i];
        if (u < cdf) return dist.branches[i];
    }
    // u fell in the round-off gap above the accumulated CDF: last branch with
    // non-zero probability.
    for (std::size_t i = dist.probabilities.size(); i-- > 0;)
        if (dist.probabilities[i] > 0.0) return dist.branches[i];
    return dist.branches.back();
}

}  // namespace

Index sample_collapse(const OutcomeDistribution& dist, std::uint64_t seed) {
    if (dist.probabilities.empty()) throw InvalidArgument("sample_collapse: empty distribution");
    Rng rng(seed);
    return draw(dist, rng);
}

std::vector<Index> sample_collapses(const OutcomeDistribution& dist, std::uint64_t seed, std::size_t count) {
    if (dist.probabilities.empty()) throw InvalidArgument("sample_collapses: empty distribution");
    Rng rng(seed);
    std::vector<Index> out(count);
    for (auto& x : out) x = draw(dist, rng);
    return out;
}

}  // namespace nhm
