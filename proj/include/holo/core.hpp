#pragma once

#include "holo/linalg.hpp"

namespace holo {

// Basis order {|0>, |e>, |1>, |h>}; the computational subspace is {0, 2}.
enum Level : int { kG = 0, kE = 1, kF = 2, kH = 3 };

class StateVector {
 public:
  explicit StateVector(const Ket4<double>& amplitudes);

  static StateVector basis(int level);

  const Ket4<double>& amplitudes() const { return amp_; }
  cplx operator()(int k) const { return amp_(k); }

 private:
  Ket4<double> amp_;
};

class DensityMatrix {
 public:
  // Validates Hermiticity (1e-12), trace (1e-10) and positivity (-1e-9).
  explicit DensityMatrix(const Operator& entries);

  static DensityMatrix pure(const StateVector& psi);
  static DensityMatrix maximally_mixed();
  // Skips validation; for integrator internals that check their own bounds.
  static DensityMatrix unchecked(const Operator& entries);

  const Operator& matrix() const { return m_; }
  cplx operator()(int i, int j) const { return m_(i, j); }
  double population(int level) const { return m_(level, level).real(); }
  double min_eigenvalue() const;

 private:
  struct NoCheck {};
  DensityMatrix(const Operator& entries, NoCheck) : m_(entries) {}
  Operator m_;
};

StateVector embed_computational(const QubitKet& v);
double state_fidelity(const StateVector& ideal, const DensityMatrix& rho);
double computational_leakage(const DensityMatrix& rho);

// Ket <-> qubit helpers for the {0, 2} block.
QubitOperator computational_block(const Operator& u);

}  // namespace holo
