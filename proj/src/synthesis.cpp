#include "holo/synthesis.hpp"

#include <cmath>
#include <sstream>

#include "holo/errors.hpp"

namespace holo {

namespace {

using Ket3 = Eigen::Matrix<cplx, 3, 1>;

// q(c) = c * cot(pi c / 2); eta_dot * tan(chi) = sigma (pi/5) omega q(c).
double q_of(double c) {
  double u = 0.5 * kPi * c;
  if (std::abs(u) < 1e-3) {
    double u2 = u * u;
    return (2.0 / kPi) * (1.0 - u2 / 3.0 - u2 * u2 / 45.0);
  }
  return c * std::cos(u) / std::sin(u);
}

double dq_of(double c) {
  double u = 0.5 * kPi * c;
  if (std::abs(u) < 1e-3) return -2.0 * u / 3.0 - 4.0 * u * u * u / 45.0;
  double su = std::sin(u);
  return std::cos(u) / su - u / (su * su);
}

// Exact zeros at the nodes where the closed forms vanish analytically.
double snap(double x) { return std::abs(x) < 1e-15 ? 0.0 : x; }

}  // namespace

void GateSpec::validate() const {
  constexpr double eps = 1e-12;
  if (!(theta >= -eps && theta <= kPi + eps))
    throw ValidationError("gate theta must lie in [0, pi]");
  if (!(phi >= -kPi - eps && phi < kPi))
    throw ValidationError("gate phi must lie in [-pi, pi)");
  if (!(gamma > -2 * kPi && gamma <= 2 * kPi + eps))
    throw ValidationError("gate gamma must lie in (-2pi, 2pi]");
}

InvariantSchedule make_invariant_schedule(const GateSpec& gate, double tau, int n_steps,
                                          std::optional<double> eta_g) {
  gate.validate();
  if (!(tau > 0.0) || !std::isfinite(tau)) throw ValidationError("tau must be positive");
  if (n_steps < 100) throw ValidationError("n_steps must be at least 100");
  if (n_steps % 2 != 0) throw ValidationError("n_steps must be even so tau/2 is a grid node");

  InvariantSchedule s;
  s.tau = tau;
  s.n_steps = n_steps;
  s.eta_g = eta_g.value_or(gate.gamma);
  const int n = n_steps + 1;
  const int mid = n_steps / 2;
  const double omega = 2 * kPi / tau;
  const double a = kPi / 5;
  for (auto* v : {&s.time, &s.chi, &s.chi_dot, &s.chi_ddot, &s.eta, &s.eta_dot, &s.eta_ddot,
                  &s.w, &s.w_dot})
    v->resize(n);

  for (int k = 0; k < n; ++k) {
    double x = 2 * kPi * k / n_steps;
    double c = std::cos(x), sn = std::sin(x);
    if (k == 0 || k == n_steps) {
      c = 1.0;
      sn = 0.0;
    } else if (k == mid) {
      c = -1.0;
      sn = 0.0;
    }
    const bool first = k <= mid;
    const double sigma = first ? -1.0 : 1.0;
    s.time[k] = k == n_steps ? tau : tau * k / n_steps;
    s.chi[k] = 0.5 * kPi * (1.0 - c);
    s.chi_dot[k] = snap(0.5 * kPi * omega * sn);
    s.chi_ddot[k] = 0.5 * kPi * omega * omega * c;
    s.eta[k] = sigma * a * sn - 0.5 * kPi + (first ? 0.0 : s.eta_g);
    s.eta_dot[k] = sigma * a * omega * c;
    s.eta_ddot[k] = -sigma * a * omega * omega * sn;
    s.w[k] = snap(sigma * a * omega * q_of(c));
    s.w_dot[k] = sigma * a * omega * dq_of(c) * (-omega * sn);
  }
  return s;
}

DriveProfile invert_invariant(const InvariantSchedule& s) {
  const int n = s.size();
  const int mid = s.midpoint();
  DriveProfile d;
  d.omega.resize(n);
  d.phi0.resize(n);
  d.rate.resize(n);

  double scale = 0.0;
  for (int k = 0; k < n; ++k) scale = std::max(scale, std::hypot(s.w[k], s.chi_dot[k]));
  const double omega = 2 * kPi / s.tau;
  const double tiny = 1e-14 * std::max(scale, 1e-300);

  for (int k = 0; k < n; ++k) {
    cplx z(-s.w[k], s.chi_dot[k]);
    cplx zdot(-s.w_dot[k], s.chi_ddot[k]);
    double mag = std::abs(z);
    double arg;
    if (k == 0 || k == mid || k == n - 1 || mag <= tiny) {
      // Removable zero of the drive: the phase is the one-sided limit of arg z.
      if (std::abs(zdot) <= tiny * omega || !std::isfinite(std::abs(zdot))) {
        std::ostringstream os;
        os << "drive phase undefined at t = " << s.time[k]
           << " ns: envelope and its rate both vanish";
        throw SynthesisError(os.str());
      }
      mag = 0.0;
      z = 0.0;
      arg = k == 0 ? std::arg(zdot) : std::arg(-zdot);
    } else {
      arg = std::arg(z);
    }
    double ph = s.eta[k] + arg;
    if (!std::isfinite(mag) || !std::isfinite(ph)) {
      std::ostringstream os;
      os << "non-finite drive at t = " << s.time[k] << " ns";
      throw SynthesisError(os.str());
    }
    d.omega[k] = mag;
    d.phi0[k] = ph;
    d.rate[k] = std::polar(1.0, s.eta[k]) * (kI * s.eta_dot[k] * z + zdot);
  }
  for (int k = 1; k < n; ++k) {
    if (k == mid + 1) continue;
    d.phi0[k] += 2 * kPi * std::round((d.phi0[k - 1] - d.phi0[k]) / (2 * kPi));
  }
  return d;
}

PulseSchedule split_pulses(const InvariantSchedule& s, const DriveProfile& d,
                           const GateSpec& gate) {
  const int n = s.size();
  if (static_cast<int>(d.omega.size()) != n || static_cast<int>(d.phi0.size()) != n)
    throw ValidationError("drive profile and schedule grids differ");
  const double sh = snap(std::sin(gate.theta / 2));
  const double ch = snap(std::cos(gate.theta / 2));
  const cplx rel = std::polar(1.0, gate.phi + kPi);

  PulseSchedule p;
  p.time = s.time;
  p.theta = gate.theta;
  p.phi = gate.phi;
  p.split_index = s.midpoint();
  p.omega0.resize(n);
  p.omega1.resize(n);
  p.phi0 = d.phi0;
  p.phi1.resize(n);
  const bool rates = static_cast<int>(d.rate.size()) == n;
  if (rates) {
    p.rate0.resize(n);
    p.rate1.resize(n);
  }
  for (int k = 0; k < n; ++k) {
    p.omega0[k] = sh * d.omega[k];
    p.omega1[k] = ch * d.omega[k];
    p.phi1[k] = d.phi0[k] + gate.phi + kPi;
    if (rates) {
      p.rate0[k] = sh * d.rate[k];
      p.rate1[k] = ch * rel * d.rate[k];
    }
  }
  return p;
}

PulseSchedule synthesize(const GateSpec& gate, double tau, int n_steps,
                         std::optional<double> eta_g) {
  auto s = make_invariant_schedule(gate, tau, n_steps, eta_g);
  return split_pulses(s, invert_invariant(s), gate);
}

QubitOperator target_unitary(const GateSpec& gate) {
  const double c = std::cos(gate.gamma / 2), sg = std::sin(gate.gamma / 2);
  const double nz = std::cos(gate.theta), st = std::sin(gate.theta);
  QubitOperator u;
  u << cplx(c, -sg * nz), -kI * sg * st * std::polar(1.0, -gate.phi),
      -kI * sg * st * std::polar(1.0, gate.phi), cplx(c, sg * nz);
  return u;
}

Eigen::Matrix<cplx, 3, 1> bright_state(const GateSpec& gate) {
  Ket3 b;
  b << std::sin(gate.theta / 2), 0.0, -std::cos(gate.theta / 2) * std::polar(1.0, gate.phi);
  return b;
}

Eigen::Matrix<cplx, 3, 1> dark_state(const GateSpec& gate) {
  Ket3 d;
  d << std::cos(gate.theta / 2), 0.0, std::sin(gate.theta / 2) * std::polar(1.0, gate.phi);
  return d;
}

Operator3 effective_hamiltonian(const PulseSchedule& p, int k) {
  Operator3 h = Operator3::Zero();
  h(0, 1) = 0.5 * p.lambda0(k);
  h(1, 2) = 0.5 * std::conj(p.lambda1(k));
  h(1, 0) = std::conj(h(0, 1));
  h(2, 1) = std::conj(h(1, 2));
  return h;
}

Operator3 invariant_matrix(const InvariantSchedule& s, const GateSpec& gate, int k) {
  const Ket3 b = bright_state(gate);
  Ket3 e = Ket3::Zero();
  e(1) = 1.0;
  const cplx ph = std::polar(1.0, -s.eta[k]);
  Operator3 eb = e * b.adjoint();
  Operator3 m = std::cos(s.chi[k]) * (e * e.adjoint() - b * b.adjoint()) +
                std::sin(s.chi[k]) * (ph * eb + std::conj(ph) * eb.adjoint());
  return 0.5 * s.g0 * m;
}

Operator3 invariant_rate(const InvariantSchedule& s, const GateSpec& gate, int k) {
  const Ket3 b = bright_state(gate);
  Ket3 e = Ket3::Zero();
  e(1) = 1.0;
  const double chi = s.chi[k], cd = s.chi_dot[k], ed = s.eta_dot[k];
  const cplx ph = std::polar(1.0, -s.eta[k]);
  Operator3 eb = (std::cos(chi) * cd * ph - kI * ed * std::sin(chi) * ph) * (e * b.adjoint());
  Operator3 m = -std::sin(chi) * cd * (e * e.adjoint() - b * b.adjoint()) + eb + eb.adjoint();
  return 0.5 * s.g0 * m;
}

std::pair<QubitKet, QubitKet> invariant_eigenvectors(const InvariantSchedule& s, int k) {
  const double c = std::cos(s.chi[k] / 2), sn = std::sin(s.chi[k] / 2);
  const cplx m = std::polar(1.0, -s.eta[k] / 2), p = std::polar(1.0, s.eta[k] / 2);
  QubitKet mu0, mu1;
  mu0 << c * m, sn * p;
  mu1 << sn * m, -c * p;
  return {mu0, mu1};
}

double dynamical_phase(const InvariantSchedule& s, const PulseSchedule& p, int first,
                       int last) {
  if (last < 0) last = s.size() - 1;
  if (first < 0 || last >= s.size() || first > last)
    throw ValidationError("dynamical_phase: node range out of bounds");
  GateSpec g{p.theta, p.phi, kPi};
  const Ket3 b = bright_state(g);
  Ket3 e = Ket3::Zero();
  e(1) = 1.0;
  auto integrand = [&](int k) {
    auto [mu0, mu1] = invariant_eigenvectors(s, k);
    (void)mu0;
    Ket3 v = mu1(0) * e + mu1(1) * b;
    return v.dot(effective_hamiltonian(p, k) * v).real();
  };
  double acc = 0.0;
  double prev = integrand(first);
  for (int k = first + 1; k <= last; ++k) {
    double cur = integrand(k);
    acc += 0.5 * (prev + cur) * (s.time[k] - s.time[k - 1]);
    prev = cur;
  }
  return acc;
}

double verify_invariant(const InvariantSchedule& s, const PulseSchedule& p) {
  GateSpec g{p.theta, p.phi, kPi};
  double worst = 0.0;
  for (int k = 0; k < s.size(); ++k) {
    Operator3 inv = invariant_matrix(s, g, k);
    Operator3 h = effective_hamiltonian(p, k);
    Operator3 r = invariant_rate(s, g, k) - kI * (inv * h - h * inv);
    worst = std::max(worst, max_abs(r));
  }
  return worst;
}

}  // namespace holo
