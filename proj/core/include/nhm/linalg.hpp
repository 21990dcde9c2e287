#pragma once

#include "nhm/types.hpp"

namespace nhm {

/// Matrix exponential exp(A) by scaling and squaring with a truncated Taylor
/// series. The series is cut when the next term falls below
/// `tol` relative to the partial sum (default 1e-13). Independent of any
/// eigensolver, so it doubles as the oracle for spectral propagation.
Matrix expm(const Matrix& a, double tol = 1e-13);

/// exp(-i H t) for a dense H.
Matrix propagator(const Matrix& h, double t, double tol = 1e-13);

double spectral_norm(const Matrix& m);
double max_abs_entry(const Matrix& m);

bool all_finite(const Matrix& m);
bool all_finite(const Vector& v);

/// Throws NonFinite naming `what` when any entry is NaN or Inf.
void require_finite(const Matrix& m, const char* what);
void require_finite(const Vector& v, const char* what);

Matrix kron(const Matrix& a, const Matrix& b);

}  // namespace nhm
