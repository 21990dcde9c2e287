#include "nhm/twostate.hpp"

#include <cmath>

#include "nhm/errors.hpp"

namespace nhm {

TwoStateVector::TwoStateVector(StateVector bra, StateVector ket)
    : bra_(std::move(bra)), ket_(std::move(ket)), overlap_(bra_.inner(ket_)) {}

double TwoStateVector::normalized_overlap() const {
    const double scale = bra_.norm() * ket_.norm();
    return scale == 0.0 ? 0.0 : std::abs(overlap_) / scale;
}

Complex weak_value(const TwoStateVector& tsv, const Operator& a, const WeakValueOptions& opts) {
    if (a.dim() != tsv.ket().dim()) throw DimensionMismatch("observable dimension does not match two-state vector");
    if (tsv.normalized_overlap() <= opts.denom_tol)
        throw OrthogonalStates("pre- and post-selected states are orthogonal; weak value undefined");
    const Vector a_ket = a.matrix() * tsv.ket().amplitudes();
    return tsv.bra().amplitudes().dot(a_ket) / tsv.overlap();
}

TwoStateVector two_state_from_branch(const BiorthogonalSystem& b, Index i) { return {b.bra(i), b.ket(i)}; }

}  // namespace nhm
