#pragma once

#include <cstdint>
#include <random>

#include "nhm/types.hpp"

namespace nhm {

/// The project-wide generator. std::mt19937_64 has a sequence fixed by the
/// standard; all conversions to floating point below are ours, so streams are
/// reproducible across standard libraries.
using Rng = std::mt19937_64;

/// Uniform double in [0, 1) with 53 random bits.
double uniform01(Rng& rng);

/// Uniform double in [lo, hi).
double uniform(Rng& rng, double lo, double hi);

/// Entries with real and imaginary parts uniform in [-1, 1).
Matrix random_complex_matrix(Rng& rng, Index dim);
Vector random_complex_vector(Rng& rng, Index dim);

/// (M + M^dagger) / 2 for M from random_complex_matrix.
Matrix random_hermitian(Rng& rng, Index dim);

}  // namespace nhm
