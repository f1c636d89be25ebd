#pragma once

#include <Eigen/Dense>
#include <complex>

namespace holo {

template <typename Scalar>
using Complex = std::complex<Scalar>;

template <typename Scalar>
using Ket4 = Eigen::Matrix<Complex<Scalar>, 4, 1>;
template <typename Scalar>
using Ket2 = Eigen::Matrix<Complex<Scalar>, 2, 1>;
template <typename Scalar>
using Mat4 = Eigen::Matrix<Complex<Scalar>, 4, 4>;
template <typename Scalar>
using Mat3 = Eigen::Matrix<Complex<Scalar>, 3, 3>;
template <typename Scalar>
using Mat2 = Eigen::Matrix<Complex<Scalar>, 2, 2>;

using cplx = Complex<double>;
using Operator = Mat4<double>;
using Operator3 = Mat3<double>;
using QubitOperator = Mat2<double>;
using QubitKet = Ket2<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

// Max-absolute-entry norm; the only matrix norm used for tolerances.
template <typename Derived>
typename Derived::RealScalar max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.cwiseAbs().maxCoeff();
}

template <typename Derived>
typename Derived::RealScalar hermiticity_error(const Eigen::MatrixBase<Derived>& m) {
  return max_abs(m - m.adjoint());
}

template <typename Derived>
typename Derived::RealScalar unitarity_error(const Eigen::MatrixBase<Derived>& u) {
  using M = Eigen::Matrix<typename Derived::Scalar, Derived::ColsAtCompileTime,
                          Derived::ColsAtCompileTime>;
  return max_abs(u.adjoint() * u - M::Identity(u.cols(), u.cols()));
}

// exp(-i h t) for Hermitian h.
template <typename Scalar, int N>
Eigen::Matrix<Complex<Scalar>, N, N> propagator(
    const Eigen::Matrix<Complex<Scalar>, N, N>& h, Scalar t) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<Complex<Scalar>, N, N>> es(h);
  Eigen::Matrix<Complex<Scalar>, N, 1> phases;
  for (int k = 0; k < h.rows(); ++k)
    phases(k) = std::polar(Scalar(1), -es.eigenvalues()(k) * t);
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

// Closest unitary in Frobenius norm (unitary factor of the polar decomposition).
template <typename Scalar, int N>
Eigen::Matrix<Complex<Scalar>, N, N> polar_unitary(
    const Eigen::Matrix<Complex<Scalar>, N, N>& m) {
  Eigen::JacobiSVD<Eigen::Matrix<Complex<Scalar>, N, N>> svd(
      m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

template <typename Scalar, int N>
Eigen::Matrix<Complex<Scalar>, N, N> commutator(
    const Eigen::Matrix<Complex<Scalar>, N, N>& a,
    const Eigen::Matrix<Complex<Scalar>, N, N>& b) {
  return a * b - b * a;
}

}  // namespace holo
