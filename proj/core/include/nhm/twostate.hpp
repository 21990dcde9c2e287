#pragma once

#include "nhm/spectral.hpp"
#include "nhm/types.hpp"

namespace nhm {

/// Pre- and post-selected description <bra| |ket>. The bra evolves backward
/// in time, the ket forward; neither needs to be normalized.
class TwoStateVector {
public:
    TwoStateVector(StateVector bra, StateVector ket);

    [[nodiscard]] const StateVector& bra() const noexcept { return bra_; }
    [[nodiscard]] const StateVector& ket() const noexcept { return ket_; }
    /// <bra|ket>
    [[nodiscard]] Complex overlap() const noexcept { return overlap_; }
    /// |<bra|ket>| / (||bra|| ||ket||)
    [[nodiscard]] double normalized_overlap() const;

private:
    StateVector bra_;
    StateVector ket_;
    Complex overlap_;
};

struct WeakValueOptions {
    /// Cutoff on the normalized overlap below which the weak value is
    /// rejected as ill defined.
    double denom_tol = 1e-12;
};

/// A_w = <bra|A|ket> / <bra|ket>. Not clamped to the spectrum of A.
/// Throws OrthogonalStates when the normalized overlap is <= denom_tol.
Complex weak_value(const TwoStateVector& tsv, const Operator& a, const WeakValueOptions& opts = {});

/// (<psi_i|, |phi_i>) of a biorthogonal system; overlap 1 under its convention.
TwoStateVector two_state_from_branch(const BiorthogonalSystem& b, Index i);

}  // namespace nhm
