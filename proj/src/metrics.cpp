#include "holo/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "holo/errors.hpp"

namespace holo {

namespace {

double fidelity_in_block(const Operator& rho, const QubitKet& ideal) {
  Ket4<double> v = Ket4<double>::Zero();
  v(kG) = ideal(0);
  v(kF) = ideal(1);
  return v.dot(rho * v).real();
}

double denoise(double x) { return std::abs(x) < 1e-12 ? 0.0 : x; }

}  // namespace

double theta_sample(int k, int n_states) {
  if (n_states < 1) throw ValidationError("n_states must be positive");
  return 2 * kPi * k / n_states;
}

QubitKet theta_state(double theta) {
  QubitKet v;
  v << std::cos(theta), std::sin(theta);
  return v;
}

QubitKet named_state(const std::string& name) {
  QubitKet v;
  if (name == "zero") {
    v << 1.0, 0.0;
  } else if (name == "one") {
    v << 0.0, 1.0;
  } else if (name == "plus") {
    v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  } else if (name == "minus") {
    v << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
  } else {
    throw ConfigurationError("unknown initial state '" + name + "'");
  }
  return v;
}

double named_state_fidelity(const ComputationalChannel& channel, const QubitOperator& target,
                            const QubitKet& psi0) {
  return fidelity_in_block(channel.apply(psi0), target * psi0);
}

GateFidelityReport score_channel(const ComputationalChannel& channel, const QubitOperator& target,
                                 int n_states) {
  if (n_states < 1) throw ValidationError("n_states must be positive");
  GateFidelityReport r;
  r.n_states = n_states;
  double fsum = 0.0, lsum = 0.0;
  for (int k = 0; k < n_states; ++k) {
    QubitKet psi = theta_state(theta_sample(k, n_states));
    Operator rho = channel.apply(psi);
    fsum += fidelity_in_block(rho, target * psi);
    lsum += rho(kE, kE).real() + rho(kH, kH).real();
  }
  r.f_g = std::clamp(fsum / n_states, 0.0, 1.0);
  r.leakage_rate = std::clamp(lsum / n_states, 0.0, 1.0);
  for (const char* name : {"plus", "zero"})
    r.f_s_named[name] = named_state_fidelity(channel, target, named_state(name));
  return r;
}

GateFidelityReport score_unitary(const Operator& u, const QubitOperator& target, int n_states) {
  ComputationalChannel ch;
  ch.a = u.col(kG) * u.col(kG).adjoint();
  ch.b = u.col(kF) * u.col(kF).adjoint();
  ch.c = u.col(kG) * u.col(kF).adjoint();
  return score_channel(ch, target, n_states);
}

GateFidelityReport gate_fidelity(const GateSpec& gate, const DeviceParams& device,
                                 const CorrectionParams& correction, const TimeGrid& grid,
                                 int n_states, bool include_leak) {
  DriveEnvelope env = build_drive(gate, correction, device, grid);
  ComputationalChannel ch = evolve_channel(env, device, grid, include_leak);
  return score_channel(ch, target_unitary(gate), n_states);
}

ErrorBudget error_budget(const GateSpec& gate, const DeviceParams& device, const TimeGrid& grid,
                         const CorrectionParams& correction, int n_states) {
  DeviceParams quiet = device;
  quiet.gamma1 = quiet.gamma2 = 0.0;
  ErrorBudget b;
  b.total_infidelity = denoise(1.0 - gate_fidelity(gate, device, correction, grid, n_states).f_g);
  b.decoherence_infidelity =
      denoise(1.0 - gate_fidelity(gate, device, correction, grid, n_states, false).f_g);
  b.leakage_infidelity = denoise(1.0 - gate_fidelity(gate, quiet, correction, grid, n_states).f_g);
  // Cross terms are split in proportion to the isolated contributions.
  const double sum = b.leakage_infidelity + b.decoherence_infidelity;
  if (sum > 0.0) {
    b.leakage_share = 100.0 * b.leakage_infidelity / sum;
    b.decoherence_share = 100.0 * b.decoherence_infidelity / sum;
  }
  return b;
}

}  // namespace holo
