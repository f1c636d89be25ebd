#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "holo/linalg.hpp"

namespace holo {

struct GateSpec {
  double theta = 0.0;  // mixing angle, [0, pi]
  double phi = 0.0;    // relative phase, [-pi, pi)
  double gamma = kPi;  // rotation angle, (-2pi, 2pi]

  static GateSpec z() { return {0.0, 0.0, kPi}; }
  static GateSpec hadamard() { return {kPi / 4, 0.0, kPi}; }

  void validate() const;
};

// Auxiliary invariant parameters chi(t), eta(t) on a uniform grid.
// The node at tau/2 carries first-half (left-limit) values of the
// eta-dependent quantities; the second half starts right after it.
struct InvariantSchedule {
  double tau = 0.0;
  int n_steps = 0;
  double eta_g = kPi;
  double g0 = 1.0;
  std::vector<double> time;
  std::vector<double> chi, chi_dot, chi_ddot;
  std::vector<double> eta, eta_dot, eta_ddot;
  // eta_dot * tan(chi) and its time derivative, evaluated without the 0*inf
  // products of the naive form.
  std::vector<double> w, w_dot;

  int size() const { return static_cast<int>(time.size()); }
  int midpoint() const { return n_steps / 2; }
  double dt() const { return tau / n_steps; }
};

InvariantSchedule make_invariant_schedule(const GateSpec& gate, double tau, int n_steps,
                                          std::optional<double> eta_g = std::nullopt);

struct DriveProfile {
  std::vector<double> omega;  // >= 0
  std::vector<double> phi0;   // unwrapped on each half
  std::vector<cplx> rate;     // d/dt of omega * exp(i phi0)
};

DriveProfile invert_invariant(const InvariantSchedule& schedule);

// Pulse 1 carries relative phase phi + pi with respect to pulse 0, so that the
// bright state sin(theta/2)|0> - cos(theta/2)e^{i phi}|1> realizes the target axis.
struct PulseSchedule {
  std::vector<double> time;
  std::vector<double> omega0, omega1;
  std::vector<double> phi0, phi1;
  std::vector<cplx> rate0, rate1;  // analytic d/dt of the complex envelopes; may be empty
  double theta = 0.0;
  double phi = 0.0;
  int split_index = -1;  // grid node of the tau/2 phase jump, -1 if none

  int size() const { return static_cast<int>(time.size()); }
  cplx lambda0(int k) const { return std::polar(omega0[k], phi0[k]); }
  cplx lambda1(int k) const { return std::polar(omega1[k], phi1[k]); }
};

PulseSchedule split_pulses(const InvariantSchedule& schedule, const DriveProfile& drive,
                           const GateSpec& gate);
PulseSchedule synthesize(const GateSpec& gate, double tau, int n_steps,
                         std::optional<double> eta_g = std::nullopt);

QubitOperator target_unitary(const GateSpec& gate);

// States in the {|0>, |e>, |1>} block.
Eigen::Matrix<cplx, 3, 1> bright_state(const GateSpec& gate);
Eigen::Matrix<cplx, 3, 1> dark_state(const GateSpec& gate);

// {0, e, 1} block of the resonant interaction Hamiltonian at node k.
Operator3 effective_hamiltonian(const PulseSchedule& pulses, int k);

Operator3 invariant_matrix(const InvariantSchedule& schedule, const GateSpec& gate, int k);
Operator3 invariant_rate(const InvariantSchedule& schedule, const GateSpec& gate, int k);

// mu0, mu1 as 2-vectors over (|e>, |Phi_b>).
std::pair<QubitKet, QubitKet> invariant_eigenvectors(const InvariantSchedule& schedule, int k);

// Trapezoid quadrature of <mu1|H_e|mu1> over nodes [first, last].
double dynamical_phase(const InvariantSchedule& schedule, const PulseSchedule& pulses,
                       int first = 0, int last = -1);

// max_k |dI/dt - i[I, H_e]|_max with analytic dI/dt.
double verify_invariant(const InvariantSchedule& schedule, const PulseSchedule& pulses);

}  // namespace holo
