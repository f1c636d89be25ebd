#include "holo/device.hpp"

#include <cmath>
#include <sstream>

#include "holo/errors.hpp"

namespace holo {

namespace {

const double kSqrt2 = std::sqrt(2.0);
const double kSqrt3 = std::sqrt(3.0);

const std::array<double, 3>& require_levels(const DeviceParams& d) {
  if (!d.omega_levels)
    throw ConfigurationError("lab-frame Hamiltonian needs omega_levels in the device config");
  return *d.omega_levels;
}

}  // namespace

void DeviceParams::validate() const {
  if (alpha == 0.0 || !std::isfinite(alpha)) throw ValidationError("alpha must be nonzero");
  if (!(gamma1 >= 0.0) || !(gamma2 >= 0.0))
    throw ValidationError("decoherence rates must be non-negative");
  if (omega_levels) {
    const auto& w = *omega_levels;
    if (std::abs((w[0] - w[1]) - alpha) > 1e-9) {
      std::ostringstream os;
      os << "omega_levels inconsistent with alpha: w0 - w1 = " << w[0] - w[1]
         << " rad/ns, alpha = " << alpha << " rad/ns";
      throw ValidationError(os.str());
    }
  }
}

DeviceParams DeviceParams::paper_sim() { return {}; }

DeviceParams DeviceParams::experiment() {
  DeviceParams d;
  std::array<double, 3> w{2 * kPi * 4.7114, 2 * kPi * 4.4336, 2 * kPi * 4.1146};
  d.omega_levels = w;
  d.alpha = w[0] - w[1];
  d.gamma1 = 1.0 / 11370.0;
  d.gamma2 = 1.0 / 870.0;
  return d;
}

DeviceParams DeviceParams::preset(const std::string& name) {
  if (name == "paper-sim") return paper_sim();
  if (name == "experiment") return experiment();
  throw ConfigurationError("unknown device preset '" + name + "' (expected paper-sim, experiment)");
}

void CorrectionParams::validate() const {
  const bool has_v = v1 != 0 || v2 != 0 || v3 != 0 || v4 != 0;
  const bool has_beta = beta1 != 0 || beta2 != 0;
  if (kind == CorrectionKind::drag && has_beta)
    throw ValidationError("drag correction does not take beta weights");
  if (kind == CorrectionKind::op && has_v)
    throw ValidationError("op correction does not take v weights");
  if (kind == CorrectionKind::none && (has_v || has_beta))
    throw ValidationError("correction weights given without a correction kind");
  for (double x : {v1, v2, v3, v4, beta1, beta2})
    if (!std::isfinite(x)) throw ValidationError("correction weights must be finite");
}

CorrectionParams CorrectionParams::drag(double v1, double v2, double v3, double v4,
                                        std::optional<double> eta_g) {
  CorrectionParams c;
  c.kind = CorrectionKind::drag;
  c.v1 = v1;
  c.v2 = v2;
  c.v3 = v3;
  c.v4 = v4;
  c.eta_g_override = eta_g;
  return c;
}

CorrectionParams CorrectionParams::op(double beta1, double beta2, std::optional<double> eta_g) {
  CorrectionParams c;
  c.kind = CorrectionKind::op;
  c.beta1 = beta1;
  c.beta2 = beta2;
  c.eta_g_override = eta_g;
  return c;
}

std::string to_string(CorrectionKind kind) {
  switch (kind) {
    case CorrectionKind::drag: return "drag";
    case CorrectionKind::op: return "op";
    default: return "none";
  }
}

CorrectionKind parse_correction_kind(const std::string& name) {
  if (name == "none") return CorrectionKind::none;
  if (name == "drag") return CorrectionKind::drag;
  if (name == "op") return CorrectionKind::op;
  throw ConfigurationError("unknown correction '" + name + "' (expected none, drag, op)");
}

DriveEnvelope DriveEnvelope::from_pulses(const PulseSchedule& p) {
  DriveEnvelope e;
  e.time = p.time;
  e.lambda0.resize(p.size());
  e.lambda1.resize(p.size());
  for (int k = 0; k < p.size(); ++k) {
    e.lambda0[k] = p.lambda0(k);
    e.lambda1[k] = p.lambda1(k);
  }
  return e;
}

std::vector<double> sampled_derivative(const std::vector<double>& t, const std::vector<double>& x,
                                       int split_index) {
  const int n = static_cast<int>(x.size());
  std::vector<double> d(n, 0.0);
  auto half = [&](int lo, int hi) {
    if (hi - lo < 2) throw ValidationError("too few samples to differentiate");
    for (int k = lo + 1; k < hi; ++k) d[k] = (x[k + 1] - x[k - 1]) / (t[k + 1] - t[k - 1]);
    double h0 = t[lo + 1] - t[lo], h1 = t[hi] - t[hi - 1];
    d[lo] = (-3 * x[lo] + 4 * x[lo + 1] - x[lo + 2]) / (2 * h0);
    d[hi] = (3 * x[hi] - 4 * x[hi - 1] + x[hi - 2]) / (2 * h1);
  };
  if (split_index > 0 && split_index < n - 1) {
    half(0, split_index);  // the split node keeps its left-side value
    half(split_index + 1, n - 1);
  } else {
    half(0, n - 1);
  }
  return d;
}

PulseSchedule apply_drag(const PulseSchedule& pulse, const CorrectionParams& params,
                         double alpha) {
  if (alpha == 0.0) throw ValidationError("DRAG needs nonzero anharmonicity");
  if (params.v1 == 0 && params.v2 == 0 && params.v3 == 0 && params.v4 == 0) return pulse;
  const int n = pulse.size();
  const bool analytic = static_cast<int>(pulse.rate0.size()) == n &&
                        static_cast<int>(pulse.rate1.size()) == n;

  auto correct = [&](std::vector<double>& omega, std::vector<double>& phase,
                     const std::vector<cplx>& rate, double va, double vb) {
    std::vector<double> x(n), y(n), dx(n), dy(n);
    for (int k = 0; k < n; ++k) {
      cplx l = std::polar(omega[k], phase[k]);
      x[k] = l.real();
      y[k] = l.imag();
    }
    if (analytic) {
      for (int k = 0; k < n; ++k) {
        dx[k] = rate[k].real();
        dy[k] = rate[k].imag();
      }
    } else {
      dx = sampled_derivative(pulse.time, x, pulse.split_index);
      dy = sampled_derivative(pulse.time, y, pulse.split_index);
    }
    for (int k = 0; k < n; ++k) {
      cplx l(x[k] + va * dx[k] / (2 * alpha), y[k] - vb * dy[k] / (2 * alpha));
      double ph = phase[k] + std::arg(l * std::polar(1.0, -phase[k]));
      omega[k] = std::abs(l);
      phase[k] = ph;
    }
  };

  PulseSchedule out = pulse;
  correct(out.omega0, out.phi0, pulse.rate0, params.v3, params.v4);
  correct(out.omega1, out.phi1, pulse.rate1, params.v1, params.v2);
  out.rate0.clear();
  out.rate1.clear();
  return out;
}

DriveEnvelope apply_op(const PulseSchedule& pulse, const CorrectionParams& params) {
  DriveEnvelope e = DriveEnvelope::from_pulses(pulse);
  const cplx c0(1.0, params.beta1), c1(1.0, params.beta2);
  for (int k = 0; k < e.size(); ++k) {
    e.lambda0[k] *= c0;
    e.lambda1[k] *= c1;
  }
  return e;
}

DriveEnvelope make_envelope(const PulseSchedule& pulse, const CorrectionParams& params,
                            double alpha) {
  params.validate();
  switch (params.kind) {
    case CorrectionKind::drag: return DriveEnvelope::from_pulses(apply_drag(pulse, params, alpha));
    case CorrectionKind::op: return apply_op(pulse, params);
    default: return DriveEnvelope::from_pulses(pulse);
  }
}

Operator h_interaction(cplx l0, cplx l1) {
  Operator h = Operator::Zero();
  h(0, 1) = 0.5 * l0;
  h(1, 2) = 0.5 * std::conj(l1);
  h(1, 0) = std::conj(h(0, 1));
  h(2, 1) = std::conj(h(1, 2));
  return h;
}

Operator h_interaction(const DriveEnvelope& env, int k) {
  return h_interaction(env.lambda0[k], env.lambda1[k]);
}

Operator h_leak(cplx l0, cplx l1, double alpha, double t) {
  const cplx e1 = std::polar(1.0, alpha * t);
  const cplx e2 = e1 * e1;
  const cplx l1c = std::conj(l1);
  const double pre = kSqrt2 / 2;
  Operator h = Operator::Zero();
  h(0, 1) = pre * 0.5 * l1c * std::conj(e1);
  h(1, 2) = pre * l0 * e1;
  h(2, 3) = pre * (std::sqrt(1.5) * l0 * e2 + 0.5 * kSqrt3 * l1c * e1);
  h(1, 0) = std::conj(h(0, 1));
  h(2, 1) = std::conj(h(1, 2));
  h(3, 2) = std::conj(h(2, 3));
  return h;
}

Operator h_leak(const DriveEnvelope& env, double alpha, int k) {
  return h_leak(env.lambda0[k], env.lambda1[k], alpha, env.time[k]);
}

Operator h_lab_frame(cplx l0, cplx l1, const DeviceParams& device, double t) {
  const auto& w = require_levels(device);
  const double f = (l0 * std::polar(1.0, w[0] * t)).real() +
                   (std::conj(l1) * std::polar(1.0, w[1] * t)).real() / kSqrt2;
  Operator h = Operator::Zero();
  h(1, 1) = w[0];
  h(2, 2) = w[0] + w[1];
  h(3, 3) = w[0] + w[1] + w[2];
  h(0, 1) = h(1, 0) = f;
  h(1, 2) = h(2, 1) = kSqrt2 * f;
  h(2, 3) = h(3, 2) = kSqrt3 * f;
  return h;
}

Operator h_lab_frame(const PulseSchedule& pulse, const DeviceParams& device, int k) {
  return h_lab_frame(pulse.lambda0(k), pulse.lambda1(k), device, pulse.time[k]);
}

Operator rotating_frame(const DeviceParams& device, double t) {
  const auto& w = require_levels(device);
  Operator r = Operator::Zero();
  r(0, 0) = 1.0;
  r(1, 1) = std::polar(1.0, w[0] * t);
  r(2, 2) = std::polar(1.0, (w[0] + w[1]) * t);
  r(3, 3) = std::polar(1.0, (w[0] + w[1] + w[2]) * t);
  return r;
}

}  // namespace holo
