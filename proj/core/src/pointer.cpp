#include "nhm/pointer.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <ostream>
#include <vector>

#include "nhm/csv.hpp"
#include "nhm/errors.hpp"

namespace nhm {

MomentumGrid::MomentumGrid(int n, double p_max) : n_(n), p_max_(p_max) {
    if (n < 2 || !std::has_single_bit(static_cast<unsigned>(n)))
        throw InvalidArgument("momentum grid size n_p must be a power of two >= 2");
    if (!(p_max > 0.0) || !std::isfinite(p_max)) throw InvalidArgument("momentum grid p_max must be positive");
    dp_ = 2.0 * p_max_ / (n_ - 1);
    dq_ = 2.0 * std::numbers::pi / (n_ * dp_);
}

Matrix MomentumGrid::position_transform() const {
    // P_k Q_j = 2 pi m / (4 n) with m = (2k - n + 1)(2j - n + 1), an integer.
    const long long period = 4LL * n_;
    std::vector<Complex> table(static_cast<std::size_t>(period));
    for (long long r = 0; r < period; ++r)
        table[static_cast<std::size_t>(r)] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) / period);

    const double scale = dp_ / std::sqrt(2.0 * std::numbers::pi);
    Matrix f(n_, n_);
    for (int j = 0; j < n_; ++j) {
        const long long bj = 2LL * j - n_ + 1;
        for (int k = 0; k < n_; ++k) {
            long long r = ((2LL * k - n_ + 1) * bj) % period;
            if (r < 0) r += period;
            f(j, k) = scale * table[static_cast<std::size_t>(r)];
        }
    }
    return f;
}

Vector MomentumGrid::to_position(const Vector& momentum_amplitudes) const {
    if (momentum_amplitudes.size() != n_) throw DimensionMismatch("to_position: amplitude count != grid size");
    return position_transform() * momentum_amplitudes;
}

PointerState PointerState::gaussian(double sigma_q, int n_p, double p_max) {
    if (!(sigma_q > 0.0)) throw InvalidArgument("pointer sigma_q must be positive");
    const double sigma_p = 1.0 / (2.0 * sigma_q);
    MomentumGrid grid(n_p, p_max > 0.0 ? p_max : 8.0 * sigma_p);
    Vector amps(n_p);
    for (int k = 0; k < n_p; ++k) {
        const double p = grid.p(k);
        amps(k) = std::exp(-p * p / (4.0 * sigma_p * sigma_p));
    }
    amps /= std::sqrt(amps.squaredNorm() * grid.dp());
    return PointerState(grid, std::move(amps), sigma_q);
}

PointerState::PointerState(MomentumGrid grid, Vector momentum_amplitudes, double sigma_q)
    : grid_(grid), amps_(std::move(momentum_amplitudes)), sigma_q_(sigma_q) {
    if (amps_.size() != grid_.size()) throw DimensionMismatch("pointer amplitudes do not match the grid");
    if (!amps_.allFinite()) throw NonFinite("pointer amplitudes contain NaN or Inf");
}

double PointerState::norm() const { return std::sqrt(amps_.squaredNorm() * grid_.dp()); }

double PointerState::mean_position() const {
    const Vector psi = position_amplitudes();
    double num = 0.0, den = 0.0;
    for (int j = 0; j < grid_.size(); ++j) {
        const double w = std::norm(psi(j));
        num += grid_.q(j) * w;
        den += w;
    }
    return num / den;
}

double PointerState::mean_momentum() const {
    double num = 0.0, den = 0.0;
    for (int k = 0; k < grid_.size(); ++k) {
        const double w = std::norm(amps_(k));
        num += grid_.p(k) * w;
        den += w;
    }
    return num / den;
}

void write_pointer_csv(std::ostream& out, const MomentumGrid& grid, const Vector& momentum_amplitudes) {
    const Vector psi = grid.to_position(momentum_amplitudes);
    CsvWriter csv(out, {"q", "prob_q", "re_q", "im_q", "p", "prob_p", "re_p", "im_p"});
    for (int j = 0; j < grid.size(); ++j) {
        csv.row(std::vector<double>{grid.q(j), std::norm(psi(j)), psi(j).real(), psi(j).imag(), grid.p(j),
                                    std::norm(momentum_amplitudes(j)), momentum_amplitudes(j).real(),
                                    momentum_amplitudes(j).imag()});
    }
}

}  // namespace nhm
