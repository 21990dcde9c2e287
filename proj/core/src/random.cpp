#include "nhm/random.hpp"

namespace nhm {

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

Matrix random_complex_matrix(Rng& rng, Index dim) {
    Matrix m(dim, dim);
    // Fill row-major so the stream order does not depend on Eigen's storage.
    for (Index r = 0; r < dim; ++r)
        for (Index c = 0; c < dim; ++c) {
            const double re = uniform(rng, -1.0, 1.0);
            const double im = uniform(rng, -1.0, 1.0);
            m(r, c) = Complex(re, im);
        }
    return m;
}

Vector random_complex_vector(Rng& rng, Index dim) {
    Vector v(dim);
    for (Index i = 0; i < dim; ++i) {
        const double re = uniform(rng, -1.0, 1.0);
        const double im = uniform(rng, -1.0, 1.0);
        v(i) = Complex(re, im);
    }
    return v;
}

Matrix random_hermitian(Rng& rng, Index dim) {
    const Matrix m = random_complex_matrix(rng, dim);
    return (m + m.adjoint()) / 2.0;
}

}  // namespace nhm
