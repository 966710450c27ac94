#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "modvar/witnesses.hpp"

namespace modvar {

inline constexpr const char* kVersion = "modvar 1.0.0";

/// Machine-readable record of one CLI run: the command, the full configuration
/// needed to reproduce it, and the results. Reports are deterministic for
/// identical inputs and seed; the timestamp stays empty unless explicitly
/// requested so that reruns are byte-identical.
struct RunReport {
  std::string command;
  nlohmann::ordered_json config;
  std::vector<WitnessResult> results;
  std::string version{kVersion};
  std::string timestamp;
};

nlohmann::ordered_json to_json(const WitnessResult& r);
nlohmann::ordered_json to_json(const RunReport& report);

/// CSV form of the results table: criterion,pairing,lhs,threshold,violation,sd.
std::string to_csv(const std::vector<WitnessResult>& results);

/// Write via temp file + rename so readers never observe a partial file.
void write_text_atomic(const std::string& path, const std::string& content);

std::string current_timestamp_utc();

}  // namespace modvar
