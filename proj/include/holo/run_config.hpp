#pragma once

#include <string>
#include <vector>

#include "holo/io.hpp"

namespace holo {

struct RunConfig {
  std::string gate_name;
  GateSpec gate;
  std::string device_name;
  DeviceParams device;
  CorrectionParams correction;
  TimeGrid grid;
  std::string initial_name;
  QubitKet initial;
  bool include_leak = true;
  int n_states = 1001;
  CorrectionKind method = CorrectionKind::op;
  SearchConfig search;
  SweepVariable sweep_var = SweepVariable::tau;
  std::vector<double> sweep_values;  // tau in ns or alpha in rad/ns
  std::string out_csv;
  std::string out_json;
  KeyValues echo;  // every key with its effective value

  // Hash of the echo without output paths and worker count.
  std::string hash() const;
};

const std::vector<std::string>& config_keys();
KeyValues default_config();

// Layers: defaults, then `base` (config file), then `overrides` (flags).
RunConfig resolve_run_config(const KeyValues& base, const KeyValues& overrides = {});

// Inclusive arithmetic range from..to in increments of step.
std::vector<double> inclusive_range(double from, double to, double step);

}  // namespace holo
