#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "holo/core.hpp"
#include "holo/device.hpp"
#include "holo/synthesis.hpp"

namespace holo {

struct TimeGrid {
  double tau = 30.0;
  int n_steps = 3000;

  void validate() const;
  double dt() const { return tau / n_steps; }
};

struct LindbladModel {
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  Operator lambda_plus;
  Operator lambda_z;

  explicit LindbladModel(double gamma1 = 0.0, double gamma2 = 0.0);
  static LindbladModel from_device(const DeviceParams& device) {
    return LindbladModel(device.gamma1, device.gamma2);
  }

  // Non-Hermitian part -(i/2) sum_j G_j A_j^dag A_j of the effective Hamiltonian.
  Operator anti_hermitian_part() const;
  // d rho / dt for a fixed Hamiltonian.
  Operator rhs(const Operator& rho, const Operator& h) const;
};

// Drive sampled at half steps (2N + 1 samples) so every integrator stage lands on a sample.
DriveEnvelope build_drive(const GateSpec& gate, const CorrectionParams& correction,
                          const DeviceParams& device, const TimeGrid& grid);

struct PropagatorDecomposition {
  Operator u_full;
  QubitOperator block;
  QubitOperator u_hol_fit;
  QubitOperator u_out;  // {e, h} block
  double delta = 0.0;
  double subspace_leakage = 0.0;
  // 1 - |tr(target^dag block)|^2 / 4
  double infidelity = 0.0;
};

PropagatorDecomposition decompose(const Operator& u, const QubitOperator& target);

PropagatorDecomposition evolve_unitary(const DriveEnvelope& env, const DeviceParams& device,
                                       const TimeGrid& grid, bool include_leak,
                                       const QubitOperator& target = QubitOperator::Identity());

// Fourth-order Magnus propagator for an arbitrary H(t) on [t0, t1].
Operator evolve_unitary(const std::function<Operator(double)>& h, double t0, double t1,
                        int n_steps);

struct Trajectory {
  std::vector<double> times;
  std::vector<std::array<double, 4>> populations;  // p0, pe, p1, ph
  std::vector<Operator> rho;
  std::vector<double> fidelity;  // filled by trajectory_fidelity
  double max_trace_error = 0.0;
  double max_hermiticity_error = 0.0;
  double min_eigenvalue = 1.0;

  DensityMatrix final_rho() const { return DensityMatrix(rho.back()); }
};

Trajectory evolve_lindblad(const DensityMatrix& rho0, const DriveEnvelope& env,
                           const DeviceParams& device, const TimeGrid& grid, bool include_leak);

std::vector<double> trajectory_fidelity(const Trajectory& traj, const StateVector& ideal);

// Final images of |0><0|, |1><1| and |0><1| under the open dynamics; by linearity these
// give the final state for any computational initial state.
struct ComputationalChannel {
  Operator a, b, c;

  Operator apply(const QubitKet& psi) const;
};

ComputationalChannel evolve_channel(const DriveEnvelope& env, const DeviceParams& device,
                                    const TimeGrid& grid, bool include_leak);

}  // namespace holo
