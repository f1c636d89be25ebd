#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "holo/linalg.hpp"
#include "holo/synthesis.hpp"

namespace holo {

// Rates and energies in rad/ns.
struct DeviceParams {
  double alpha = 2 * kPi * 0.225;
  double gamma1 = 2 * kPi * 4e-6;
  double gamma2 = 2 * kPi * 4e-6;
  std::optional<std::array<double, 3>> omega_levels;  // transition energies w0, w1, w2

  void validate() const;

  static DeviceParams paper_sim();
  // Lab-measured device: alpha = w0 - w1 (277.8 MHz), gamma1 = 1/T1, gamma2 = 1/T2
  // of the lowest transition.
  static DeviceParams experiment();
  static DeviceParams preset(const std::string& name);
};

enum class CorrectionKind { none, drag, op };

struct CorrectionParams {
  CorrectionKind kind = CorrectionKind::none;
  double v1 = 0, v2 = 0, v3 = 0, v4 = 0;
  double beta1 = 0, beta2 = 0;
  std::optional<double> eta_g_override;

  void validate() const;

  static CorrectionParams none() { return {}; }
  static CorrectionParams drag(double v1, double v2, double v3, double v4,
                               std::optional<double> eta_g = std::nullopt);
  static CorrectionParams op(double beta1, double beta2,
                             std::optional<double> eta_g = std::nullopt);
};

std::string to_string(CorrectionKind kind);
CorrectionKind parse_correction_kind(const std::string& name);

struct DriveEnvelope {
  std::vector<double> time;
  std::vector<cplx> lambda0, lambda1;

  int size() const { return static_cast<int>(time.size()); }
  static DriveEnvelope from_pulses(const PulseSchedule& pulses);
};

PulseSchedule apply_drag(const PulseSchedule& pulse, const CorrectionParams& params, double alpha);
DriveEnvelope apply_op(const PulseSchedule& pulse, const CorrectionParams& params);
// Dispatches on params.kind.
DriveEnvelope make_envelope(const PulseSchedule& pulse, const CorrectionParams& params,
                            double alpha);

// Time derivative of a sampled real series, second order, without differencing across
// the split node (each half gets one-sided stencils at its ends).
std::vector<double> sampled_derivative(const std::vector<double>& t, const std::vector<double>& x,
                                       int split_index);

Operator h_interaction(cplx lambda0, cplx lambda1);
Operator h_interaction(const DriveEnvelope& env, int k);
Operator h_leak(cplx lambda0, cplx lambda1, double alpha, double t);
Operator h_leak(const DriveEnvelope& env, double alpha, int k);

Operator h_lab_frame(cplx lambda0, cplx lambda1, const DeviceParams& device, double t);
Operator h_lab_frame(const PulseSchedule& pulse, const DeviceParams& device, int k);
// R(t) with psi_rot = R psi_lab; diagonal phases of the cumulative level energies.
Operator rotating_frame(const DeviceParams& device, double t);

}  // namespace holo
