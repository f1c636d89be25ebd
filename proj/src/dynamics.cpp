#include "holo/dynamics.hpp"

#include <cmath>
#include <sstream>

#include "holo/errors.hpp"

namespace holo {

namespace {

std::vector<Operator> sample_hamiltonians(const DriveEnvelope& env, const DeviceParams& device,
                                          const TimeGrid& grid, bool include_leak) {
  grid.validate();
  device.validate();
  const int expected = 2 * grid.n_steps + 1;
  if (env.size() != expected) {
    std::ostringstream os;
    os << "drive envelope has " << env.size() << " samples, expected " << expected
       << " (half-step sampling of the time grid)";
    throw ValidationError(os.str());
  }
  std::vector<Operator> hs(expected);
  double worst = 0.0;
  for (int k = 0; k < expected; ++k) {
    hs[k] = h_interaction(env, k);
    if (include_leak) hs[k] += h_leak(env, device.alpha, k);
    worst = std::max(worst, max_abs(hs[k]));
  }
  double stiffness = 4.0 * worst + (include_leak ? 2.0 * std::abs(device.alpha) : 0.0);
  if (stiffness * grid.dt() > 0.5) {
    std::ostringstream os;
    os << "time step " << grid.dt() << " ns too coarse for drive scale " << stiffness
       << " rad/ns; increase n_steps";
    throw IntegrationError(os.str());
  }
  return hs;
}

// exp of the fourth-order Magnus generator from samples at t, t + dt/2, t + dt.
Operator magnus_step(const Operator& h0, const Operator& hm, const Operator& h1, double dt) {
  Operator k = (dt / 6.0) * (h0 + 4.0 * hm + h1) + kI * (dt * dt / 12.0) * commutator(h0, h1);
  k = 0.5 * (k + k.adjoint());
  return propagator(k, 1.0);
}

class Integrator {
 public:
  Integrator(const LindbladModel& model, const std::vector<Operator>& hs)
      : model_(model) {
    const Operator anti = model.anti_hermitian_part();
    gen_.resize(hs.size());
    for (size_t k = 0; k < hs.size(); ++k) gen_[k] = -kI * (hs[k] + anti);
    lp_ = model.lambda_plus;
    for (int i = 0; i < 4; ++i) dz_(i) = model.lambda_z(i, i).real();
  }

  Operator rhs(const Operator& rho, int sample) const {
    const Operator& g = gen_[sample];
    Operator out = g * rho + rho * g.adjoint();
    if (model_.gamma1 != 0.0) out += model_.gamma1 * (lp_ * rho * lp_.adjoint());
    if (model_.gamma2 != 0.0)
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out(i, j) += model_.gamma2 * dz_(i) * dz_(j) * rho(i, j);
    return out;
  }

  // One RK4 step from node n (samples 2n, 2n+1, 2n+2).
  Operator step(const Operator& rho, int n, double dt) const {
    const int s = 2 * n;
    Operator k1 = rhs(rho, s);
    Operator k2 = rhs(rho + 0.5 * dt * k1, s + 1);
    Operator k3 = rhs(rho + 0.5 * dt * k2, s + 1);
    Operator k4 = rhs(rho + dt * k3, s + 2);
    return rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }

 private:
  const LindbladModel& model_;
  std::vector<Operator> gen_;
  Operator lp_;
  Eigen::Vector4d dz_;
};

}  // namespace

void TimeGrid::validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw ValidationError("tau must be positive");
  if (n_steps < 100) throw ValidationError("n_steps must be at least 100");
  if (n_steps % 2 != 0) throw ValidationError("n_steps must be even so tau/2 is a grid node");
}

LindbladModel::LindbladModel(double g1, double g2) : gamma1(g1), gamma2(g2) {
  if (!(g1 >= 0.0) || !(g2 >= 0.0)) throw ValidationError("decoherence rates must be non-negative");
  lambda_plus = Operator::Zero();
  lambda_plus(0, 1) = 1.0;
  lambda_plus(1, 2) = std::sqrt(2.0);
  lambda_plus(2, 3) = std::sqrt(3.0);
  lambda_z = Operator::Zero();
  for (int i = 0; i < 4; ++i) lambda_z(i, i) = double(i);
}

Operator LindbladModel::anti_hermitian_part() const {
  return -0.5 * kI *
         (gamma1 * lambda_plus.adjoint() * lambda_plus + gamma2 * lambda_z.adjoint() * lambda_z);
}

Operator LindbladModel::rhs(const Operator& rho, const Operator& h) const {
  Operator heff = h + anti_hermitian_part();
  Operator out = -kI * (heff * rho - rho * heff.adjoint());
  out += gamma1 * lambda_plus * rho * lambda_plus.adjoint();
  out += gamma2 * lambda_z * rho * lambda_z.adjoint();
  return out;
}

DriveEnvelope build_drive(const GateSpec& gate, const CorrectionParams& correction,
                          const DeviceParams& device, const TimeGrid& grid) {
  grid.validate();
  PulseSchedule p = synthesize(gate, grid.tau, 2 * grid.n_steps, correction.eta_g_override);
  return make_envelope(p, correction, device.alpha);
}

PropagatorDecomposition decompose(const Operator& u, const QubitOperator& target) {
  PropagatorDecomposition d;
  d.u_full = u;
  d.block = computational_block(u);
  d.u_hol_fit = polar_unitary(d.block);
  d.u_out << u(1, 1), u(1, 3), u(3, 1), u(3, 3);
  d.delta = std::arg((target.adjoint() * d.u_hol_fit).trace());
  d.subspace_leakage = std::max(0.0, 1.0 - 0.5 * (d.block.adjoint() * d.block).trace().real());
  d.infidelity = 1.0 - std::norm((target.adjoint() * d.block).trace()) / 4.0;
  return d;
}

PropagatorDecomposition evolve_unitary(const DriveEnvelope& env, const DeviceParams& device,
                                       const TimeGrid& grid, bool include_leak,
                                       const QubitOperator& target) {
  auto hs = sample_hamiltonians(env, device, grid, include_leak);
  const double dt = grid.dt();
  Operator u = Operator::Identity();
  for (int n = 0; n < grid.n_steps; ++n)
    u = magnus_step(hs[2 * n], hs[2 * n + 1], hs[2 * n + 2], dt) * u;
  double err = unitarity_error(u);
  if (err > 1e-8) {
    std::ostringstream os;
    os << "propagator lost unitarity (" << err << "); reduce the time step";
    throw IntegrationError(os.str());
  }
  return decompose(u, target);
}

Operator evolve_unitary(const std::function<Operator(double)>& h, double t0, double t1,
                        int n_steps) {
  if (n_steps < 1) throw ValidationError("n_steps must be positive");
  const double dt = (t1 - t0) / n_steps;
  Operator u = Operator::Identity();
  Operator h0 = h(t0);
  for (int n = 0; n < n_steps; ++n) {
    double t = t0 + n * dt;
    Operator hm = h(t + 0.5 * dt);
    Operator h1 = h(t + dt);
    if (4.0 * max_abs(hm) * std::abs(dt) > 0.5)
      throw IntegrationError("time step too coarse for the Hamiltonian scale; increase n_steps");
    u = magnus_step(h0, hm, h1, dt) * u;
    h0 = h1;
  }
  return u;
}

Trajectory evolve_lindblad(const DensityMatrix& rho0, const DriveEnvelope& env,
                           const DeviceParams& device, const TimeGrid& grid, bool include_leak) {
  auto hs = sample_hamiltonians(env, device, grid, include_leak);
  LindbladModel model = LindbladModel::from_device(device);
  Integrator integ(model, hs);
  const double dt = grid.dt();
  const int n = grid.n_steps;

  Trajectory tr;
  tr.times.resize(n + 1);
  tr.populations.resize(n + 1);
  tr.rho.resize(n + 1);
  Operator rho = rho0.matrix();
  for (int k = 0; k <= n; ++k) {
    if (k > 0) rho = integ.step(rho, k - 1, dt);
    tr.times[k] = k == n ? grid.tau : grid.tau * k / n;
    tr.rho[k] = rho;
    for (int l = 0; l < 4; ++l) tr.populations[k][l] = rho(l, l).real();
    tr.max_trace_error = std::max(tr.max_trace_error, std::abs(rho.trace() - 1.0));
    tr.max_hermiticity_error = std::max(tr.max_hermiticity_error, hermiticity_error(rho));
    double lmin = DensityMatrix::unchecked(rho).min_eigenvalue();
    tr.min_eigenvalue = std::min(tr.min_eigenvalue, lmin);
    if (lmin < -1e-6) {
      std::ostringstream os;
      os << "density matrix lost positivity at t = " << tr.times[k] << " ns (eigenvalue "
         << lmin << "); reduce the time step";
      throw IntegrationError(os.str());
    }
  }
  return tr;
}

std::vector<double> trajectory_fidelity(const Trajectory& traj, const StateVector& ideal) {
  std::vector<double> f(traj.rho.size());
  const auto& psi = ideal.amplitudes();
  for (size_t k = 0; k < traj.rho.size(); ++k) f[k] = psi.dot(traj.rho[k] * psi).real();
  return f;
}

Operator ComputationalChannel::apply(const QubitKet& psi) const {
  const cplx x = psi(0), y = psi(1);
  Operator off = x * std::conj(y) * c;
  return std::norm(x) * a + std::norm(y) * b + off + off.adjoint();
}

ComputationalChannel evolve_channel(const DriveEnvelope& env, const DeviceParams& device,
                                    const TimeGrid& grid, bool include_leak) {
  auto hs = sample_hamiltonians(env, device, grid, include_leak);
  LindbladModel model = LindbladModel::from_device(device);
  Integrator integ(model, hs);
  const double dt = grid.dt();
  ComputationalChannel ch;
  ch.a = ch.b = ch.c = Operator::Zero();
  ch.a(0, 0) = 1.0;
  ch.b(2, 2) = 1.0;
  ch.c(0, 2) = 1.0;
  for (int n = 0; n < grid.n_steps; ++n) {
    ch.a = integ.step(ch.a, n, dt);
    ch.b = integ.step(ch.b, n, dt);
    ch.c = integ.step(ch.c, n, dt);
  }
  return ch;
}

}  // namespace holo
