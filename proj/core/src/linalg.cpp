#include "nhm/linalg.hpp"

#include <cmath>
#include <string>

#include "nhm/errors.hpp"

namespace nhm {

Operator::Operator(Matrix m) : m_(std::move(m)) {
    if (m_.rows() < 1 || m_.rows() != m_.cols()) {
        throw DimensionMismatch("operator must be a non-empty square matrix, got " +
                                std::to_string(m_.rows()) + "x" + std::to_string(m_.cols()));
    }
    require_finite(m_, "operator");
}

Operator::Operator(std::initializer_list<std::initializer_list<Complex>> rows)
    : Operator([&] {
          const auto n = static_cast<Index>(rows.size());
          Matrix m(n, n > 0 ? static_cast<Index>(rows.begin()->size()) : 0);
          Index r = 0;
          for (const auto& row : rows) {
              if (static_cast<Index>(row.size()) != m.cols()) {
                  throw DimensionMismatch("ragged operator initializer");
              }
              Index c = 0;
              for (const auto& x : row) m(r, c++) = x;
              ++r;
          }
          return m;
      }()) {}

Operator Operator::identity(Index dim) { return Operator(Matrix::Identity(dim, dim)); }
Operator Operator::zero(Index dim) { return Operator(Matrix::Zero(dim, dim)); }

bool Operator::is_hermitian(double tol) const {
    const double scale = std::max(1.0, max_abs_entry(m_));
    return max_abs_entry(m_ - m_.adjoint()) <= tol * scale;
}

Operator operator+(const Operator& a, const Operator& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("operator sum: dimension mismatch");
    return Operator(a.m_ + b.m_);
}
Operator operator-(const Operator& a, const Operator& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("operator difference: dimension mismatch");
    return Operator(a.m_ - b.m_);
}
Operator operator*(const Operator& a, const Operator& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("operator product: dimension mismatch");
    return Operator(a.m_ * b.m_);
}
Operator operator*(Complex s, const Operator& a) { return Operator(s * a.m_); }

StateVector::StateVector(Vector v) : v_(std::move(v)) {
    if (v_.size() < 1) throw DimensionMismatch("state vector must have dimension >= 1");
    require_finite(v_, "state vector");
}

StateVector::StateVector(std::initializer_list<Complex> amps)
    : StateVector([&] {
          Vector v(static_cast<Index>(amps.size()));
          Index i = 0;
          for (const auto& a : amps) v(i++) = a;
          return v;
      }()) {}

StateVector StateVector::normalized() const {
    const double n = v_.norm();
    if (n == 0.0) throw NumericalError("cannot normalize the zero vector");
    return StateVector(v_ / n);
}

Complex StateVector::inner(const StateVector& other) const {
    if (dim() != other.dim()) throw DimensionMismatch("inner product: dimension mismatch");
    return v_.dot(other.v_);  // Eigen's dot conjugates the left operand
}

StateVector operator+(const StateVector& a, const StateVector& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("state sum: dimension mismatch");
    return StateVector(a.v_ + b.v_);
}
StateVector operator*(Complex s, const StateVector& a) { return StateVector(s * a.v_); }

StateVector apply(const Operator& op, const StateVector& ket) {
    if (op.dim() != ket.dim()) throw DimensionMismatch("operator/state dimension mismatch");
    return StateVector(op.matrix() * ket.amplitudes());
}

Matrix expm(const Matrix& a, double tol) {
    const Index n = a.rows();
    const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    if (norm1 > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm1 / 0.5)));
    const Matrix b = a / std::ldexp(1.0, squarings);

    Matrix sum = Matrix::Identity(n, n);
    Matrix term = Matrix::Identity(n, n);
    // ||b||_1 <= 1/2, so the tail after k terms is bounded by 2 * ||term_k||.
    for (int k = 1; k < 64; ++k) {
        term = (term * b) / static_cast<double>(k);
        sum += term;
        const double tn = term.cwiseAbs().colwise().sum().maxCoeff();
        if (tn <= tol * 0.5) break;
    }
    for (int s = 0; s < squarings; ++s) sum = sum * sum;
    return sum;
}

Matrix propagator(const Matrix& h, double t, double tol) { return expm(Complex(0.0, -t) * h, tol); }

double spectral_norm(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

double max_abs_entry(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

bool all_finite(const Matrix& m) { return m.allFinite(); }
bool all_finite(const Vector& v) { return v.allFinite(); }

void require_finite(const Matrix& m, const char* what) {
    if (!m.allFinite()) throw NonFinite(std::string(what) + " contains NaN or Inf entries");
}
void require_finite(const Vector& v, const char* what) {
    if (!v.allFinite()) throw NonFinite(std::string(what) + " contains NaN or Inf entries");
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

}  // namespace nhm
