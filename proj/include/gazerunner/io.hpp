#pragma once

#include "gazerunner/engine.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace gazerunner {

// Config documents mirror SimConfig:
//   {"seed", "timestep", "session_duration", "attention_mode",
//    "attention": {...}, "world": {...}, "rules": {...}, "camera": {...}}
// Missing keys keep their defaults; unknown keys are rejected.

/// Throws std::invalid_argument on unknown keys, wrong types, or a config
/// that fails validation.
SimConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const SimConfig& config);
SimConfig load_config(const std::filesystem::path& path);

// Input traces are CSV with a required header `tick,u,v,valid,aim_du,aim_dv,fire`.
// u and v may be empty when valid is 0.

inline constexpr const char* kTraceHeader = "tick,u,v,valid,aim_du,aim_dv,fire";

/// Throws std::invalid_argument with the offending line number.
std::vector<InputFrame> read_trace(std::istream& in);
std::vector<InputFrame> load_trace(const std::filesystem::path& path);
/// Values are written with round-trip precision so a replay is bit-exact.
void write_trace(std::ostream& out, std::span<const InputFrame> frames);

nlohmann::json metrics_to_json(const SessionMetrics& metrics);
nlohmann::json aggregate_to_json(const AggregateReport& report);

/// Plain-text table: one row per session (kill %, noticed %, deaths) and a
/// final `mean ± STE` row.
std::string format_session_table(std::span<const SessionMetrics> sessions, const AggregateReport& report);

}  // namespace gazerunner
