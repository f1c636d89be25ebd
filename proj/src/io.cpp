#include "holo/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "holo/errors.hpp"

namespace holo {

namespace {

std::string trim(const std::string& s) {
  const char* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::string fmt(double x) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

}  // namespace

std::string tool_version() { return HOLO_VERSION; }

double parse_number(const std::string& text, const std::string& what) {
  std::string t = trim(text);
  size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (t.empty() || used != t.size() || !std::isfinite(v))
    throw ConfigurationError("invalid number for " + what + ": '" + text + "'");
  return v;
}

double parse_angle(const std::string& text) {
  std::string t = trim(text);
  auto pos = t.find("pi");
  if (pos == std::string::npos) return parse_number(t, "angle");
  std::string coef = trim(t.substr(0, pos));
  std::string rest = trim(t.substr(pos + 2));
  double c = 1.0;
  if (coef == "-") c = -1.0;
  else if (coef == "+" || coef.empty()) c = 1.0;
  else {
    if (coef.back() == '*') coef.pop_back();
    c = parse_number(coef, "angle '" + text + "'");
  }
  double d = 1.0;
  if (!rest.empty()) {
    if (rest[0] != '/') throw ConfigurationError("invalid angle '" + text + "'");
    d = parse_number(rest.substr(1), "angle '" + text + "'");
    if (d == 0.0) throw ConfigurationError("invalid angle '" + text + "'");
  }
  return c * kPi / d;
}

bool parse_bool(const std::string& text, const std::string& what) {
  std::string t = trim(text);
  if (t == "1" || t == "true" || t == "yes" || t == "on") return true;
  if (t == "0" || t == "false" || t == "no" || t == "off") return false;
  throw ConfigurationError("invalid boolean for " + what + ": '" + text + "'");
}

KeyValues parse_key_values(std::istream& in) {
  KeyValues kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigurationError("line " + std::to_string(lineno) + ": expected key=value");
    std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigurationError("line " + std::to_string(lineno) + ": empty key");
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

KeyValues load_key_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot open config file '" + path + "'");
  try {
    return parse_key_values(in);
  } catch (const ConfigurationError& e) {
    throw ConfigurationError(path + ": " + e.what());
  }
}

DeviceParams device_from_keys(const KeyValues& kv, DeviceParams base) {
  auto get = [&](const char* key) -> const std::string* {
    auto it = kv.find(key);
    return it == kv.end() || it->second.empty() ? nullptr : &it->second;
  };
  if (auto* v = get("alpha_over_2pi_mhz")) base.alpha = 2 * kPi * parse_number(*v, "alpha") * 1e-3;
  if (auto* v = get("gamma1_over_2pi_khz"))
    base.gamma1 = 2 * kPi * parse_number(*v, "gamma1") * 1e-6;
  if (auto* v = get("gamma2_over_2pi_khz"))
    base.gamma2 = 2 * kPi * parse_number(*v, "gamma2") * 1e-6;
  const char* wk[3] = {"omega0_ghz", "omega1_ghz", "omega2_ghz"};
  int given = 0;
  for (auto* k : wk) given += get(k) != nullptr;
  if (given != 0 && given != 3)
    throw ConfigurationError("omega0_ghz, omega1_ghz and omega2_ghz must be given together");
  if (given == 3) {
    std::array<double, 3> w;
    for (int i = 0; i < 3; ++i) w[i] = 2 * kPi * parse_number(*get(wk[i]), wk[i]);
    base.omega_levels = w;
    if (!get("alpha_over_2pi_mhz")) base.alpha = w[0] - w[1];
  } else if (get("alpha_over_2pi_mhz")) {
    base.omega_levels.reset();
  }
  base.validate();
  return base;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string config_hash(const KeyValues& echo) {
  std::string canon;
  for (const auto& [k, v] : echo) canon += k + "=" + v + "\n";
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << fnv1a(canon);
  return os.str();
}

void write_csv_preamble(std::ostream& out, const KeyValues& echo,
                        const std::vector<std::string>& notes) {
  out << "# holo " << tool_version() << " config=" << config_hash(echo) << "\n";
  for (const auto& n : notes) out << "# " << n << "\n";
}

void write_pulse_csv(std::ostream& out, const PulseSchedule& p) {
  out << "t_ns,omega0_rad_per_ns,omega1_rad_per_ns,phi0_rad,phi1_rad\n";
  for (int k = 0; k < p.size(); ++k)
    out << fmt(p.time[k]) << ',' << fmt(p.omega0[k]) << ',' << fmt(p.omega1[k]) << ','
        << fmt(p.phi0[k]) << ',' << fmt(p.phi1[k]) << '\n';
}

void write_trajectory_csv(std::ostream& out, const Trajectory& tr) {
  out << "t_ns,p0,pe,p1,ph,fidelity\n";
  for (size_t k = 0; k < tr.times.size(); ++k) {
    const auto& p = tr.populations[k];
    out << fmt(tr.times[k]) << ',' << fmt(p[0]) << ',' << fmt(p[1]) << ',' << fmt(p[2]) << ','
        << fmt(p[3]) << ',';
    if (k < tr.fidelity.size()) out << fmt(tr.fidelity[k]);
    out << '\n';
  }
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "value,baseline_fg,opt_fg,beta1,beta2,eta_g_over_pi\n";
  for (const auto& r : rows) {
    if (!r.ok) {
      out << fmt(r.value) << ",,,,,\n";
      continue;
    }
    double eta = r.best_params.eta_g_override.value_or(kPi) / kPi;
    out << fmt(r.value) << ',' << fmt(r.baseline_f_g) << ',' << fmt(r.opt_f_g) << ','
        << fmt(r.best_params.beta1) << ',' << fmt(r.best_params.beta2) << ',' << fmt(eta) << '\n';
  }
}

nlohmann::json to_json(const GateSpec& g) {
  return {{"theta", g.theta}, {"phi", g.phi}, {"gamma", g.gamma}};
}

nlohmann::json to_json(const DeviceParams& d) {
  nlohmann::json j{{"alpha_rad_per_ns", d.alpha},
                   {"gamma1_per_ns", d.gamma1},
                   {"gamma2_per_ns", d.gamma2},
                   {"alpha_over_2pi_mhz", d.alpha / (2 * kPi) * 1e3},
                   {"gamma1_over_2pi_khz", d.gamma1 / (2 * kPi) * 1e6},
                   {"gamma2_over_2pi_khz", d.gamma2 / (2 * kPi) * 1e6}};
  if (d.omega_levels) j["omega_levels_rad_per_ns"] = *d.omega_levels;
  return j;
}

nlohmann::json to_json(const CorrectionParams& c) {
  nlohmann::json j{{"kind", to_string(c.kind)}};
  if (c.kind == CorrectionKind::drag) {
    j["v1"] = c.v1;
    j["v2"] = c.v2;
    j["v3"] = c.v3;
    j["v4"] = c.v4;
  } else if (c.kind == CorrectionKind::op) {
    j["beta1"] = c.beta1;
    j["beta2"] = c.beta2;
  }
  if (c.eta_g_override) j["eta_g_over_pi"] = *c.eta_g_override / kPi;
  return j;
}

nlohmann::json to_json(const GateFidelityReport& r) {
  return {{"f_g", r.f_g}, {"f_s_named", r.f_s_named}, {"leakage_rate", r.leakage_rate},
          {"n_states", r.n_states}};
}

nlohmann::json to_json(const ErrorBudget& b) {
  return {{"total_infidelity", b.total_infidelity},
          {"leakage_infidelity", b.leakage_infidelity},
          {"decoherence_infidelity", b.decoherence_infidelity},
          {"leakage_share", b.leakage_share},
          {"decoherence_share", b.decoherence_share}};
}

nlohmann::json to_json(const OptimizationResult& r, bool include_trace) {
  nlohmann::json j{{"best_params", to_json(r.best_params)},
                   {"best_f_g", r.best_f_g},
                   {"baseline_f_g", r.baseline_f_g},
                   {"best_report", to_json(r.best_report)},
                   {"evaluations", r.evaluations},
                   {"status", r.status == OptimizationStatus::ok ? "ok" : "warning"}};
  if (!r.message.empty()) j["message"] = r.message;
  if (include_trace) {
    auto& tr = j["search_trace"] = nlohmann::json::array();
    for (const auto& p : r.search_trace) tr.push_back({{"params", to_json(p.params)}, {"f_g", p.f_g}});
  }
  return j;
}

nlohmann::json to_json(const SweepRow& r) {
  nlohmann::json j{{"value", r.value}, {"ok", r.ok}};
  if (!r.ok) {
    j["error"] = r.error;
    return j;
  }
  j["baseline_f_g"] = r.baseline_f_g;
  j["opt_f_g"] = r.opt_f_g;
  j["best_params"] = to_json(r.best_params);
  j["status"] = r.status == OptimizationStatus::ok ? "ok" : "warning";
  return j;
}

}  // namespace holo
