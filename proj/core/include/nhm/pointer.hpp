#pragma once

#include <iosfwd>

#include "nhm/types.hpp"

namespace nhm {

/// Symmetric momentum grid with n (a power of two) samples
/// P_k = (k - (n-1)/2) dP, dP = 2 p_max / (n - 1), so P_0 = -p_max and
/// P_{n-1} = +p_max. The conjugate position grid is
/// Q_j = (j - (n-1)/2) dQ with dQ = 2 pi / (n dP).
class MomentumGrid {
public:
    MomentumGrid(int n, double p_max);

    [[nodiscard]] int size() const noexcept { return n_; }
    [[nodiscard]] double p_max() const noexcept { return p_max_; }
    [[nodiscard]] double dp() const noexcept { return dp_; }
    [[nodiscard]] double dq() const noexcept { return dq_; }
    [[nodiscard]] double p(int k) const noexcept { return (k - 0.5 * (n_ - 1)) * dp_; }
    [[nodiscard]] double q(int j) const noexcept { return (j - 0.5 * (n_ - 1)) * dq_; }

    /// psi(Q_j) = dP / sqrt(2 pi) * sum_k psi~(P_k) exp(i P_k Q_j), evaluated
    /// with an exact integer phase table. Unitary up to the dP/dQ measures:
    /// sum_j |psi(Q_j)|^2 dQ = sum_k |psi~(P_k)|^2 dP.
    [[nodiscard]] Vector to_position(const Vector& momentum_amplitudes) const;
    /// The n x n matrix F of to_position, psi = F psi~.
    [[nodiscard]] Matrix position_transform() const;

    friend bool operator==(const MomentumGrid&, const MomentumGrid&) = default;

private:
    int n_;
    double p_max_;
    double dp_;
    double dq_;
};

/// One-dimensional pointer wavefunction sampled in momentum space.
class PointerState {
public:
    /// Gaussian with position width sigma_q (momentum width 1/(2 sigma_q)),
    /// centred at Q = P = 0. p_max <= 0 selects 8 sigma_P. Normalized so that
    /// sum_k |psi~_k|^2 dP = 1.
    static PointerState gaussian(double sigma_q = 1.0, int n_p = 512, double p_max = 0.0);

    PointerState(MomentumGrid grid, Vector momentum_amplitudes, double sigma_q);

    [[nodiscard]] const MomentumGrid& grid() const noexcept { return grid_; }
    [[nodiscard]] const Vector& momentum_amplitudes() const noexcept { return amps_; }
    [[nodiscard]] double sigma_q() const noexcept { return sigma_q_; }
    [[nodiscard]] Vector position_amplitudes() const { return grid_.to_position(amps_); }

    [[nodiscard]] double norm() const;
    [[nodiscard]] double mean_position() const;
    [[nodiscard]] double mean_momentum() const;

private:
    MomentumGrid grid_;
    Vector amps_;
    double sigma_q_;
};

/// Columns: q, prob_q, re_q, im_q, p, prob_p, re_p, im_p (one row per grid
/// index j = k).
void write_pointer_csv(std::ostream& out, const MomentumGrid& grid, const Vector& momentum_amplitudes);

}  // namespace nhm
