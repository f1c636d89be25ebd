#include "holo/core.hpp"

#include <algorithm>
#include <sstream>

#include "holo/errors.hpp"

namespace holo {

namespace {

constexpr double kNormTol = 1e-12;

}  // namespace

StateVector::StateVector(const Ket4<double>& amplitudes) : amp_(amplitudes) {
  double n2 = amp_.squaredNorm();
  if (std::abs(n2 - 1.0) > kNormTol) {
    std::ostringstream os;
    os << "state vector not normalized: |psi|^2 = " << n2;
    throw ValidationError(os.str());
  }
}

StateVector StateVector::basis(int level) {
  if (level < 0 || level > 3) throw ValidationError("basis level out of range");
  Ket4<double> a = Ket4<double>::Zero();
  a(level) = 1.0;
  return StateVector(a);
}

DensityMatrix::DensityMatrix(const Operator& entries) : m_(entries) {
  if (!m_.allFinite()) throw ValidationError("density matrix has non-finite entries");
  double herm = hermiticity_error(m_);
  if (herm > 1e-12) {
    std::ostringstream os;
    os << "density matrix not Hermitian (deviation " << herm << ")";
    throw ValidationError(os.str());
  }
  double tr = m_.trace().real();
  if (std::abs(tr - 1.0) > 1e-10) {
    std::ostringstream os;
    os << "density matrix trace " << tr << " != 1";
    throw ValidationError(os.str());
  }
  double lmin = min_eigenvalue();
  if (lmin < -1e-9) {
    std::ostringstream os;
    os << "density matrix not positive semidefinite (min eigenvalue " << lmin << ")";
    throw ValidationError(os.str());
  }
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
  return DensityMatrix(psi.amplitudes() * psi.amplitudes().adjoint(), NoCheck{});
}

DensityMatrix DensityMatrix::maximally_mixed() {
  return DensityMatrix(Operator::Identity() * 0.25, NoCheck{});
}

DensityMatrix DensityMatrix::unchecked(const Operator& entries) {
  return DensityMatrix(entries, NoCheck{});
}

double DensityMatrix::min_eigenvalue() const {
  Operator h = 0.5 * (m_ + m_.adjoint());
  Eigen::SelfAdjointEigenSolver<Operator> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

StateVector embed_computational(const QubitKet& v) {
  double n2 = v.squaredNorm();
  if (std::abs(n2 - 1.0) > kNormTol) {
    std::ostringstream os;
    os << "qubit vector not normalized: |v|^2 = " << n2;
    throw ValidationError(os.str());
  }
  Ket4<double> a = Ket4<double>::Zero();
  a(kG) = v(0);
  a(kF) = v(1);
  return StateVector(a);
}

double state_fidelity(const StateVector& ideal, const DensityMatrix& rho) {
  const auto& psi = ideal.amplitudes();
  double f = psi.dot(rho.matrix() * psi).real();
  return std::clamp(f, 0.0, 1.0);
}

double computational_leakage(const DensityMatrix& rho) {
  return std::max(0.0, rho.population(kE) + rho.population(kH));
}

QubitOperator computational_block(const Operator& u) {
  QubitOperator b;
  b << u(kG, kG), u(kG, kF), u(kF, kG), u(kF, kF);
  return b;
}

}  // namespace holo
