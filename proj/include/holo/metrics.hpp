#pragma once

#include <map>
#include <string>
#include <vector>

#include "holo/dynamics.hpp"

namespace holo {

struct GateFidelityReport {
  double f_g = 0.0;
  std::map<std::string, double> f_s_named;  // "plus", "zero"
  double leakage_rate = 0.0;
  int n_states = 1001;
};

// Initial states cos(T)|0> + sin(T)|1>, T = 2 pi k / n for k < n (the periodic endpoint is
// not repeated).
double theta_sample(int k, int n_states);
QubitKet theta_state(double theta);

GateFidelityReport score_channel(const ComputationalChannel& channel, const QubitOperator& target,
                                 int n_states = 1001);
// Closed-system variant: the final state is U psi.
GateFidelityReport score_unitary(const Operator& u, const QubitOperator& target,
                                 int n_states = 1001);

GateFidelityReport gate_fidelity(const GateSpec& gate, const DeviceParams& device,
                                 const CorrectionParams& correction, const TimeGrid& grid,
                                 int n_states = 1001, bool include_leak = true);

double named_state_fidelity(const ComputationalChannel& channel, const QubitOperator& target,
                            const QubitKet& psi0);
QubitKet named_state(const std::string& name);

struct ErrorBudget {
  double total_infidelity = 0.0;
  double leakage_infidelity = 0.0;      // decoherence off, leakage on
  double decoherence_infidelity = 0.0;  // leakage off, decoherence on
  double leakage_share = 0.0;           // percent
  double decoherence_share = 0.0;       // percent
};

ErrorBudget error_budget(const GateSpec& gate, const DeviceParams& device, const TimeGrid& grid,
                         const CorrectionParams& correction = {}, int n_states = 1001);

struct SearchConfig {
  int budget = 2000;
  int search_states = 41;
  int final_states = 1001;
  int workers = 0;  // 0: hardware concurrency
  double beta_lo = -0.6, beta_hi = 0.1, beta_step = 0.05;
  double v_lo = -6.0, v_hi = 6.0, v_step = 0.5;
  // eta_g box in units of pi, centered on the nominal gamma/pi.
  double eta_halfwidth_lo = 0.1, eta_halfwidth_hi = 0.2, eta_step = 0.01;
  double xatol = 1e-4;
  double fatol = 1e-9;
};

struct TracePoint {
  CorrectionParams params;
  double f_g = 0.0;
};

enum class OptimizationStatus { ok, warning };

struct OptimizationResult {
  CorrectionParams best_params;
  double best_f_g = 0.0;
  double baseline_f_g = 0.0;
  GateFidelityReport best_report;
  int evaluations = 0;
  std::vector<TracePoint> search_trace;
  OptimizationStatus status = OptimizationStatus::ok;
  std::string message;
};

OptimizationResult optimize(const GateSpec& gate, const DeviceParams& device,
                            CorrectionKind method, const TimeGrid& grid,
                            const SearchConfig& config = {});

enum class SweepVariable { tau, alpha };

struct SweepRow {
  double value = 0.0;
  bool ok = false;
  std::string error;
  double baseline_f_g = 0.0;
  double opt_f_g = 0.0;
  CorrectionParams best_params;
  OptimizationStatus status = OptimizationStatus::ok;
};

// tau values in ns, alpha values in rad/ns. The time step is held at grid.tau / grid.n_steps.
std::vector<SweepRow> sweep(const GateSpec& gate, const DeviceParams& device,
                            CorrectionKind method, SweepVariable variable,
                            std::vector<double> values, const TimeGrid& grid,
                            const SearchConfig& config = {});

int resolve_workers(int requested);

}  // namespace holo
