// holo: synthesize, simulate and optimize holonomic single-qubit gates on a four-level qudit.
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "holo/errors.hpp"
#include "holo/run_config.hpp"

using namespace holo;

namespace {

struct Flags {
  std::string config;
  std::map<std::string, std::string> values;
  std::vector<std::pair<CLI::Option*, std::string>> bound;
  bool no_leak = false;
  CLI::Option* no_leak_opt = nullptr;
};

void add_run_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "key=value config file");
  auto bind = [&](const std::string& flag, const std::string& key, const std::string& help) {
    f.bound.emplace_back(cmd->add_option(flag, f.values[key], help), key);
  };
  bind("--gate", "gate", "z, hadamard or custom");
  bind("--theta", "theta", "mixing angle (radians, or e.g. 0.25pi)");
  bind("--phi", "phi", "relative phase");
  bind("--gamma", "gamma", "rotation angle");
  bind("--device", "device", "preset (paper-sim, experiment) or device config file");
  bind("--alpha", "alpha_over_2pi_mhz", "anharmonicity alpha/2pi in MHz");
  bind("--gamma1", "gamma1_over_2pi_khz", "decay rate Gamma1/2pi in kHz");
  bind("--gamma2", "gamma2_over_2pi_khz", "dephasing rate Gamma2/2pi in kHz");
  bind("--correction", "correction", "none, drag or op");
  for (const char* v : {"v1", "v2", "v3", "v4", "beta1", "beta2"})
    bind(std::string("--") + v, v, std::string("correction weight ") + v);
  bind("--eta-g", "eta_g", "geometric phase parameter (e.g. 0.983pi)");
  bind("--tau", "tau", "gate time in ns");
  bind("--steps", "steps", "time steps (even, >= 100)");
  bind("--initial", "initial", "plus, zero, one, minus or 'a,b'");
  bind("--n-states", "n_states", "states in the gate-fidelity family");
  bind("--method", "method", "optimizer correction: drag or op");
  bind("--budget", "budget", "optimizer evaluation budget");
  bind("--search-states", "search_states", "state family size during search");
  bind("--workers", "workers", "worker threads (0: HOLO_WORKERS or all cores)");
  bind("--var", "var", "sweep variable: tau (ns) or alpha (MHz/2pi)");
  bind("--from", "from", "sweep start");
  bind("--to", "to", "sweep end");
  bind("--step", "step", "sweep increment");
  bind("--out", "out", "CSV output path (default stdout)");
  bind("--json", "json", "JSON report path");
  f.no_leak_opt = cmd->add_flag("--no-leak", f.no_leak, "drop the leakage Hamiltonian");
}

RunConfig resolve(const Flags& f) {
  KeyValues base;
  if (!f.config.empty()) base = load_key_values(f.config);
  KeyValues over;
  for (const auto& [opt, key] : f.bound)
    if (opt->count() > 0) over[key] = f.values.at(key);
  if (f.no_leak_opt->count() > 0) over["leak"] = "false";
  return resolve_run_config(base, over);
}

// Writes to path, or to stdout when path is empty.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw ConfigurationError("cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

// Wall time goes to stderr so that reports stay bitwise reproducible.
nlohmann::json metadata(const RunConfig& rc, double seconds) {
  std::fprintf(stderr, "wall time: %.3f s\n", seconds);
  nlohmann::json cfg(rc.echo);
  return {{"tool", "holo"},
          {"version", tool_version()},
          {"config_hash", rc.hash()},
          {"config", cfg},
          {"gate", to_json(rc.gate)},
          {"device", to_json(rc.device)},
          {"correction", to_json(rc.correction)},
          {"grid", {{"tau_ns", rc.grid.tau}, {"n_steps", rc.grid.n_steps}, {"dt_ns", rc.grid.dt()}}}};
}

void emit_json(const RunConfig& rc, const nlohmann::json& report) {
  Sink s(rc.out_json);
  s.stream() << report.dump(2) << "\n";
}

std::vector<std::string> csv_notes(const RunConfig& rc) {
  std::vector<std::string> notes{"gate=" + rc.gate_name, "device=" + rc.device_name,
                                 "correction=" + to_string(rc.correction.kind)};
  if (rc.correction.eta_g_override) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "eta_g=%.6gpi", *rc.correction.eta_g_override / kPi);
    notes.push_back(buf);
  }
  return notes;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_synth(const RunConfig& rc) {
  InvariantSchedule s = make_invariant_schedule(rc.gate, rc.grid.tau, rc.grid.n_steps,
                                                rc.correction.eta_g_override);
  PulseSchedule p = split_pulses(s, invert_invariant(s), rc.gate);
  double peak = 0.0;
  for (int k = 0; k < p.size(); ++k) peak = std::max({peak, p.omega0[k], p.omega1[k]});
  if (rc.correction.kind != CorrectionKind::none) {
    DriveEnvelope env = make_envelope(p, rc.correction, rc.device.alpha);
    for (int k = 0; k < p.size(); ++k) {
      p.omega0[k] = std::abs(env.lambda0[k]);
      p.omega1[k] = std::abs(env.lambda1[k]);
      p.phi0[k] = env.lambda0[k] == 0.0 ? p.phi0[k] : std::arg(env.lambda0[k]);
      p.phi1[k] = env.lambda1[k] == 0.0 ? p.phi1[k] : std::arg(env.lambda1[k]);
    }
  }
  Sink out(rc.out_csv);
  write_csv_preamble(out.stream(), rc.echo, csv_notes(rc));
  write_pulse_csv(out.stream(), p);
  std::fprintf(stderr, "max drive amplitude: %.4f MHz (x 2pi)\n", peak / (2 * kPi) * 1e3);
  std::fprintf(stderr, "dynamical phase residual: %.3e rad\n", dynamical_phase(s, p));
  std::fprintf(stderr, "invariant residual: %.3e\n", verify_invariant(s, p));
  return 0;
}

int cmd_simulate(const RunConfig& rc) {
  auto t0 = std::chrono::steady_clock::now();
  DriveEnvelope env = build_drive(rc.gate, rc.correction, rc.device, rc.grid);
  StateVector psi0 = embed_computational(rc.initial);
  Trajectory tr = evolve_lindblad(DensityMatrix::pure(psi0), env, rc.device, rc.grid,
                                  rc.include_leak);
  StateVector ideal = embed_computational(target_unitary(rc.gate) * rc.initial);
  tr.fidelity = trajectory_fidelity(tr, ideal);
  GateFidelityReport rep =
      score_channel(evolve_channel(env, rc.device, rc.grid, rc.include_leak),
                    target_unitary(rc.gate), rc.n_states);

  Sink out(rc.out_csv);
  write_csv_preamble(out.stream(), rc.echo, csv_notes(rc));
  write_trajectory_csv(out.stream(), tr);

  DensityMatrix fin = tr.final_rho();
  double fs = state_fidelity(ideal, fin);
  nlohmann::json report = metadata(rc, seconds_since(t0));
  report["initial_state"] = rc.initial_name;
  report["final"] = {{"f_s", fs},
                     {"leakage", computational_leakage(fin)},
                     {"populations", tr.populations.back()},
                     {"max_trace_error", tr.max_trace_error},
                     {"min_eigenvalue", tr.min_eigenvalue}};
  report["gate_fidelity"] = to_json(rep);
  if (!rc.out_json.empty()) emit_json(rc, report);
  std::fprintf(stderr, "F_s = %.6f  leakage = %.3e  F_g = %.6f\n", fs, computational_leakage(fin),
               rep.f_g);
  return 0;
}

int cmd_fidelity(const RunConfig& rc) {
  auto t0 = std::chrono::steady_clock::now();
  GateFidelityReport rep =
      gate_fidelity(rc.gate, rc.device, rc.correction, rc.grid, rc.n_states, rc.include_leak);
  nlohmann::json report = metadata(rc, seconds_since(t0));
  report["gate_fidelity"] = to_json(rep);
  emit_json(rc, report);
  return 0;
}

int cmd_budget(const RunConfig& rc) {
  auto t0 = std::chrono::steady_clock::now();
  ErrorBudget b = error_budget(rc.gate, rc.device, rc.grid, rc.correction, rc.n_states);
  GateFidelityReport rep = gate_fidelity(rc.gate, rc.device, rc.correction, rc.grid, rc.n_states);
  nlohmann::json report = metadata(rc, seconds_since(t0));
  report["gate_fidelity"] = to_json(rep);
  report["error_budget"] = to_json(b);
  emit_json(rc, report);
  return 0;
}

int cmd_optimize(const RunConfig& rc) {
  auto t0 = std::chrono::steady_clock::now();
  OptimizationResult r = optimize(rc.gate, rc.device, rc.method, rc.grid, rc.search);
  nlohmann::json report = metadata(rc, seconds_since(t0));
  report["method"] = to_string(rc.method);
  report["gate_fidelity"] = to_json(r.best_report);
  report["optimization"] = to_json(r);
  emit_json(rc, report);
  std::fprintf(stderr, "baseline F_g = %.6f  optimized F_g = %.6f  (%d evaluations)\n",
               r.baseline_f_g, r.best_f_g, r.evaluations);
  if (r.status == OptimizationStatus::warning) {
    std::fprintf(stderr, "warning: %s\n", r.message.c_str());
    return 2;
  }
  return 0;
}

int cmd_sweep(const RunConfig& rc) {
  if (rc.sweep_values.empty()) throw ConfigurationError("sweep needs --from, --to and --step");
  auto t0 = std::chrono::steady_clock::now();
  auto rows = sweep(rc.gate, rc.device, rc.method, rc.sweep_var, rc.sweep_values, rc.grid,
                    rc.search);
  bool warn = false;
  nlohmann::json jrows = nlohmann::json::array();
  for (auto& row : rows) {
    warn |= !row.ok || row.status == OptimizationStatus::warning;
    if (!row.ok) std::fprintf(stderr, "row %g failed: %s\n", row.value, row.error.c_str());
    jrows.push_back(to_json(row));
  }
  // CSV values are in the CLI units (ns or MHz/2pi).
  std::vector<SweepRow> shown = rows;
  if (rc.sweep_var == SweepVariable::alpha)
    for (auto& row : shown) row.value = row.value / (2 * kPi) * 1e3;
  Sink out(rc.out_csv);
  write_csv_preamble(out.stream(), rc.echo, csv_notes(rc));
  write_sweep_csv(out.stream(), shown);
  if (!rc.out_json.empty()) {
    nlohmann::json report = metadata(rc, seconds_since(t0));
    report["method"] = to_string(rc.method);
    report["variable"] = rc.sweep_var == SweepVariable::tau ? "tau" : "alpha";
    report["rows"] = jrows;
    emit_json(rc, report);
  }
  return warn ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"holonomic gate synthesis, simulation and optimization"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);

  struct Command {
    const char* name;
    const char* help;
    int (*run)(const RunConfig&);
  };
  const Command commands[] = {
      {"synth", "write the drive pulse CSV", cmd_synth},
      {"simulate", "integrate the master equation from one initial state", cmd_simulate},
      {"fidelity", "gate fidelity over the state family", cmd_fidelity},
      {"budget", "leakage / decoherence error budget", cmd_budget},
      {"optimize", "optimize DRAG or OP correction parameters", cmd_optimize},
      {"sweep", "optimize across gate times or anharmonicities", cmd_sweep},
  };
  std::vector<std::unique_ptr<Flags>> flags;
  std::vector<CLI::App*> subs;
  for (const auto& c : commands) {
    flags.push_back(std::make_unique<Flags>());
    subs.push_back(app.add_subcommand(c.name, c.help));
    add_run_flags(subs.back(), *flags.back());
  }

  CLI11_PARSE(app, argc, argv);

  for (size_t i = 0; i < subs.size(); ++i) {
    if (!subs[i]->parsed()) continue;
    try {
      return commands[i].run(resolve(*flags[i]));
    } catch (const ValidationError& e) {
      std::fprintf(stderr, "holo %s: invalid input: %s\n", commands[i].name, e.what());
    } catch (const std::exception& e) {
      std::fprintf(stderr, "holo %s: %s\n", commands[i].name, e.what());
    }
    return 1;
  }
  return 1;
}
