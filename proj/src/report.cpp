#include "modvar/report.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "modvar/counts.hpp"

namespace modvar {

nlohmann::ordered_json to_json(const WitnessResult& r) {
  nlohmann::ordered_json j;
  j["criterion"] = criterion_name(r.criterion);
  j["pairing"] = pairing_name(r.pairing);
  j["lhs"] = r.lhs;
  j["threshold"] = r.threshold;
  j["violation"] = r.violation;
  if (r.sd)
    j["sd"] = *r.sd;
  else
    j["sd"] = nullptr;
  j["components"] = r.components;
  return j;
}

nlohmann::ordered_json to_json(const RunReport& report) {
  nlohmann::ordered_json j;
  j["command"] = report.command;
  j["provenance"] = {{"version", report.version}, {"timestamp", report.timestamp}};
  j["config"] = report.config;
  j["results"] = nlohmann::ordered_json::array();
  for (const auto& r : report.results) j["results"].push_back(to_json(r));
  return j;
}

std::string to_csv(const std::vector<WitnessResult>& results) {
  std::ostringstream out;
  out << "criterion,pairing,lhs,threshold,violation,sd\n";
  out.precision(17);
  for (const auto& r : results) {
    out << criterion_name(r.criterion) << ',' << pairing_name(r.pairing) << ',' << r.lhs << ','
        << r.threshold << ',' << r.violation << ',';
    if (r.sd) out << *r.sd;
    out << "\n";
  }
  return out.str();
}

void write_text_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::trunc);
    if (!f) throw io_error("cannot write " + tmp);
    f << content;
    if (!f.good()) throw io_error("write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

std::string current_timestamp_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace modvar
