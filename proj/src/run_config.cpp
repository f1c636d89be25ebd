#include "holo/run_config.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "holo/errors.hpp"

namespace holo {

namespace {

bool is_hash_exempt(const std::string& key) {
  return key == "out" || key == "json" || key == "workers";
}

int parse_int(const std::string& text, const std::string& what) {
  double v = parse_number(text, what);
  if (v != std::floor(v) || std::abs(v) > 1e9)
    throw ConfigurationError(what + " must be an integer, got '" + text + "'");
  return static_cast<int>(v);
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [key, value] : default_config()) k.push_back(key);
    return k;
  }();
  return keys;
}

KeyValues default_config() {
  return {{"gate", "z"},
          {"theta", ""},
          {"phi", ""},
          {"gamma", ""},
          {"device", "paper-sim"},
          {"alpha_over_2pi_mhz", ""},
          {"gamma1_over_2pi_khz", ""},
          {"gamma2_over_2pi_khz", ""},
          {"omega0_ghz", ""},
          {"omega1_ghz", ""},
          {"omega2_ghz", ""},
          {"correction", "none"},
          {"v1", "0"},
          {"v2", "0"},
          {"v3", "0"},
          {"v4", "0"},
          {"beta1", "0"},
          {"beta2", "0"},
          {"eta_g", ""},
          {"tau", "30"},
          {"steps", "3000"},
          {"initial", ""},
          {"leak", "true"},
          {"n_states", "1001"},
          {"method", "op"},
          {"budget", "2000"},
          {"search_states", "41"},
          {"workers", "0"},
          {"var", "tau"},
          {"from", ""},
          {"to", ""},
          {"step", ""},
          {"out", ""},
          {"json", ""}};
}

std::string RunConfig::hash() const {
  KeyValues h;
  for (const auto& [k, v] : echo)
    if (!is_hash_exempt(k)) h[k] = v;
  return config_hash(h);
}

std::vector<double> inclusive_range(double from, double to, double step) {
  if (!(step > 0.0)) throw ConfigurationError("sweep step must be positive");
  if (to < from) throw ConfigurationError("sweep range is empty (to < from)");
  std::vector<double> v;
  const long n = std::lround(std::floor((to - from) / step + 1e-9));
  for (long i = 0; i <= n; ++i) v.push_back(from + i * step);
  return v;
}

RunConfig resolve_run_config(const KeyValues& base, const KeyValues& overrides) {
  KeyValues kv = default_config();
  for (const auto* layer : {&base, &overrides})
    for (const auto& [k, v] : *layer) {
      if (!kv.count(k)) throw ConfigurationError("unknown config key '" + k + "'");
      kv[k] = v;
    }

  RunConfig rc;
  auto get = [&](const char* key) -> const std::string& { return kv.at(key); };

  rc.gate_name = get("gate");
  if (rc.gate_name == "z") rc.gate = GateSpec::z();
  else if (rc.gate_name == "hadamard" || rc.gate_name == "h") rc.gate = GateSpec::hadamard();
  else if (rc.gate_name == "custom") {
    if (get("theta").empty() || get("phi").empty() || get("gamma").empty())
      throw ConfigurationError("gate=custom needs theta, phi and gamma");
  } else {
    throw ConfigurationError("unknown gate '" + rc.gate_name + "' (expected z, hadamard, custom)");
  }
  if (!get("theta").empty()) rc.gate.theta = parse_angle(get("theta"));
  if (!get("phi").empty()) rc.gate.phi = parse_angle(get("phi"));
  if (!get("gamma").empty()) rc.gate.gamma = parse_angle(get("gamma"));
  rc.gate.validate();

  rc.device_name = get("device");
  DeviceParams dev;
  if (rc.device_name == "paper-sim" || rc.device_name == "experiment") {
    dev = DeviceParams::preset(rc.device_name);
  } else if (std::filesystem::exists(rc.device_name)) {
    dev = device_from_keys(load_key_values(rc.device_name));
  } else {
    throw ConfigurationError("device '" + rc.device_name +
                             "' is neither a preset (paper-sim, experiment) nor a readable file");
  }
  rc.device = device_from_keys(kv, dev);

  rc.correction.kind = parse_correction_kind(get("correction"));
  if (rc.correction.kind == CorrectionKind::drag) {
    rc.correction.v1 = parse_number(get("v1"), "v1");
    rc.correction.v2 = parse_number(get("v2"), "v2");
    rc.correction.v3 = parse_number(get("v3"), "v3");
    rc.correction.v4 = parse_number(get("v4"), "v4");
  } else if (rc.correction.kind == CorrectionKind::op) {
    rc.correction.beta1 = parse_number(get("beta1"), "beta1");
    rc.correction.beta2 = parse_number(get("beta2"), "beta2");
  }
  if (!get("eta_g").empty()) rc.correction.eta_g_override = parse_angle(get("eta_g"));
  rc.correction.validate();

  rc.grid.tau = parse_number(get("tau"), "tau");
  rc.grid.n_steps = parse_int(get("steps"), "steps");
  rc.grid.validate();

  rc.initial_name = get("initial");
  if (rc.initial_name.empty()) rc.initial_name = rc.gate_name == "z" ? "plus" : "zero";
  auto comma = rc.initial_name.find(',');
  if (comma == std::string::npos) {
    rc.initial = named_state(rc.initial_name);
  } else {
    double a = parse_number(rc.initial_name.substr(0, comma), "initial");
    double b = parse_number(rc.initial_name.substr(comma + 1), "initial");
    double n = std::hypot(a, b);
    if (std::abs(n - 1.0) > 1e-9)
      throw ConfigurationError("explicit initial state must be normalized");
    rc.initial << a / n, b / n;
  }

  rc.include_leak = parse_bool(get("leak"), "leak");
  rc.n_states = parse_int(get("n_states"), "n_states");
  if (rc.n_states < 1) throw ConfigurationError("n_states must be positive");

  rc.method = parse_correction_kind(get("method"));
  if (rc.method == CorrectionKind::none) throw ConfigurationError("method must be drag or op");
  rc.search.budget = parse_int(get("budget"), "budget");
  rc.search.search_states = parse_int(get("search_states"), "search_states");
  rc.search.final_states = rc.n_states;
  rc.search.workers = parse_int(get("workers"), "workers");

  const std::string& var = get("var");
  if (var == "tau") rc.sweep_var = SweepVariable::tau;
  else if (var == "alpha") rc.sweep_var = SweepVariable::alpha;
  else throw ConfigurationError("sweep variable must be tau or alpha");
  if (!get("from").empty() || !get("to").empty()) {
    if (get("from").empty() || get("to").empty() || get("step").empty())
      throw ConfigurationError("sweep needs from, to and step");
    rc.sweep_values = inclusive_range(parse_number(get("from"), "from"),
                                      parse_number(get("to"), "to"),
                                      parse_number(get("step"), "step"));
    if (rc.sweep_var == SweepVariable::alpha)
      for (double& a : rc.sweep_values) a = 2 * kPi * a * 1e-3;  // MHz/2pi -> rad/ns
  }

  rc.out_csv = get("out");
  rc.out_json = get("json");
  kv["initial"] = rc.initial_name;
  rc.echo = kv;
  return rc;
}

}  // namespace holo
