#include <cmath>

#include <gtest/gtest.h>

#include "nhm/errors.hpp"
#include "nhm/linalg.hpp"
#include "nhm/random.hpp"

using namespace nhm;

TEST(Operator, RejectsNonSquareAndNonFinite) {
    EXPECT_THROW(Operator(Matrix(2, 3)), DimensionMismatch);
    EXPECT_THROW(Operator(Matrix(0, 0)), InvalidArgument);
    Matrix m = Matrix::Identity(2, 2);
    m(0, 1) = Complex(std::nan(""), 0.0);
    EXPECT_THROW(Operator{m}, NonFinite);
}

TEST(Operator, ArithmeticAndHermiticity) {
    const Operator x{{0.0, 1.0}, {1.0, 0.0}};
    const Operator y{{0.0, -kI}, {kI, 0.0}};
    EXPECT_TRUE(x.is_hermitian());
    EXPECT_TRUE(y.is_hermitian());
    // [x, y] = 2 i z
    const Operator c = x * y - y * x;
    EXPECT_NEAR(std::abs(c(0, 0) - 2.0 * kI), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(c(1, 1) + 2.0 * kI), 0.0, 1e-15);
    EXPECT_FALSE((x + kI * y).is_hermitian());
    EXPECT_EQ(Operator::identity(3).dim(), 3);
}

TEST(StateVector, InnerConjugatesLeft) {
    const StateVector a{kI, 0.0};
    const StateVector b{1.0, 0.0};
    EXPECT_EQ(a.inner(b), -kI);
    EXPECT_EQ(b.inner(a), kI);
    EXPECT_NEAR((StateVector{3.0, 4.0}).normalized().norm(), 1.0, 1e-15);
    EXPECT_THROW(StateVector(Vector(0)), InvalidArgument);
}

TEST(Expm, PauliRotation) {
    // exp(-i theta sigma_x) = cos(theta) I - i sin(theta) sigma_x
    const double theta = 1.3;
    Matrix sx(2, 2);
    sx << 0.0, 1.0, 1.0, 0.0;
    const Matrix u = propagator(sx, theta);
    EXPECT_NEAR(std::abs(u(0, 0) - std::cos(theta)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(u(0, 1) + kI * std::sin(theta)), 0.0, 1e-14);
}

TEST(Expm, NilpotentIsExactPolynomial) {
    Matrix n = Matrix::Zero(3, 3);
    n(0, 1) = 2.0;
    n(1, 2) = 3.0;
    const Matrix e = expm(n);
    Matrix expect = Matrix::Identity(3, 3) + n + 0.5 * n * n;
    EXPECT_LT(max_abs_entry(e - expect), 1e-13);
}

TEST(Expm, LargeNormDiagonal) {
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = Complex(-30.0, 5.0);
    d(1, 1) = Complex(2.0, -40.0);
    const Matrix e = expm(d);
    EXPECT_NEAR(std::abs(e(0, 0) - std::exp(d(0, 0))) / std::abs(std::exp(d(0, 0))), 0.0, 1e-11);
    EXPECT_NEAR(std::abs(e(1, 1) - std::exp(d(1, 1))) / std::abs(std::exp(d(1, 1))), 0.0, 1e-11);
}

TEST(Expm, HermitianPropagatorIsUnitary) {
    Rng rng(7);
    for (int dim : {2, 5, 16}) {
        const Matrix h = random_hermitian(rng, dim);
        const Matrix u = propagator(h, 3.7);
        EXPECT_LT(max_abs_entry(u.adjoint() * u - Matrix::Identity(dim, dim)), 1e-12);
    }
}

TEST(Linalg, KronAndNorms) {
    Matrix a(2, 2), b(2, 2);
    a << 1.0, 2.0, 3.0, 4.0;
    b << 0.0, 1.0, 1.0, 0.0;
    const Matrix k = kron(a, b);
    EXPECT_EQ(k.rows(), 4);
    EXPECT_EQ(k(0, 1), Complex(1.0));
    EXPECT_EQ(k(3, 2), Complex(4.0));
    EXPECT_NEAR(spectral_norm(b), 1.0, 1e-14);
    EXPECT_EQ(max_abs_entry(a), 4.0);
}
