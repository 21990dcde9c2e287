#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>

#include <Eigen/Dense>

namespace nhm {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr Complex kI{0.0, 1.0};

/// Dense square complex matrix: a Hamiltonian or an observable.
///
/// Construction validates shape and finiteness; the matrix is immutable
/// afterwards.
class Operator {
public:
    explicit Operator(Matrix m);
    Operator(std::initializer_list<std::initializer_list<Complex>> rows);

    static Operator identity(Index dim);
    static Operator zero(Index dim);

    [[nodiscard]] Index dim() const noexcept { return m_.rows(); }
    [[nodiscard]] const Matrix& matrix() const noexcept { return m_; }
    [[nodiscard]] Complex operator()(Index r, Index c) const { return m_(r, c); }

    [[nodiscard]] Operator adjoint() const { return Operator(m_.adjoint()); }
    [[nodiscard]] bool is_hermitian(double tol = 1e-12) const;

    friend Operator operator+(const Operator& a, const Operator& b);
    friend Operator operator-(const Operator& a, const Operator& b);
    friend Operator operator*(const Operator& a, const Operator& b);
    friend Operator operator*(Complex s, const Operator& a);

private:
    Matrix m_;
};

/// Unnormalized state (ket or bra coefficients). For a bra the stored
/// amplitudes are those of the corresponding ket, i.e. <psi| = psi^dagger.
class StateVector {
public:
    explicit StateVector(Vector v);
    StateVector(std::initializer_list<Complex> amps);

    [[nodiscard]] Index dim() const noexcept { return v_.size(); }
    [[nodiscard]] const Vector& amplitudes() const noexcept { return v_; }
    [[nodiscard]] Complex operator[](Index i) const { return v_(i); }
    [[nodiscard]] double norm() const { return v_.norm(); }
    [[nodiscard]] double norm_squared() const { return v_.squaredNorm(); }
    [[nodiscard]] StateVector normalized() const;

    /// <this|other>
    [[nodiscard]] Complex inner(const StateVector& other) const;

    friend StateVector operator+(const StateVector& a, const StateVector& b);
    friend StateVector operator*(Complex s, const StateVector& a);

private:
    Vector v_;
};

StateVector apply(const Operator& op, const StateVector& ket);

}  // namespace nhm
