#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "holo/metrics.hpp"

namespace holo {

using KeyValues = std::map<std::string, std::string>;

std::string tool_version();

// "0.983pi", "pi", "-0.5pi", "pi/2" or plain radians.
double parse_angle(const std::string& text);
double parse_number(const std::string& text, const std::string& what);
bool parse_bool(const std::string& text, const std::string& what);

// key=value lines; '#' starts a comment. Throws ConfigurationError with the line number.
KeyValues parse_key_values(std::istream& in);
KeyValues load_key_values(const std::string& path);

// Device from alpha_over_2pi_mhz, gamma{1,2}_over_2pi_khz, omega{0,1,2}_ghz; keys missing from
// kv keep the values of base.
DeviceParams device_from_keys(const KeyValues& kv, DeviceParams base = DeviceParams::paper_sim());

std::uint64_t fnv1a(const std::string& text);
std::string config_hash(const KeyValues& echo);

// "# holo <version> config=<hash>" plus optional "# key=value" lines.
void write_csv_preamble(std::ostream& out, const KeyValues& echo,
                        const std::vector<std::string>& notes = {});
void write_pulse_csv(std::ostream& out, const PulseSchedule& pulses);
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

nlohmann::json to_json(const GateSpec& gate);
nlohmann::json to_json(const DeviceParams& device);
nlohmann::json to_json(const CorrectionParams& params);
nlohmann::json to_json(const GateFidelityReport& report);
nlohmann::json to_json(const ErrorBudget& budget);
nlohmann::json to_json(const OptimizationResult& result, bool include_trace = true);
nlohmann::json to_json(const SweepRow& row);

}  // namespace holo
