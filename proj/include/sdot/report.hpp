#pragma once

#include <json.hpp>

#include "sdot/core.hpp"

namespace sdot {

// ---------------------------------------------------------------------------
// Machine-readable check reports.  Serialization is byte-identical for equal
// inputs and seeds: reports are ordered by (suite, check, input) and timings
// are kept out of the JSON unless explicitly requested.
// ---------------------------------------------------------------------------

inline constexpr int kReportSchemaVersion = 1;

struct CheckReport {
  std::string suite;
  std::string check;
  std::string input;
  std::string verdict;  // "pass" | "fail" | "skipped"
  std::vector<std::string> witnesses;
  std::map<std::string, std::int64_t> counts;
  std::vector<std::string> routes;   // strict-justified vs 2-pullback
  std::vector<std::string> checked;  // parameter ranges actually exercised
  std::string trunc;
  double timing_ms = 0;

  bool passed() const { return verdict == "pass"; }
  bool failed() const { return verdict == "fail"; }
};

inline void sort_reports(std::vector<CheckReport>& rs) {
  std::sort(rs.begin(), rs.end(), [](const CheckReport& a, const CheckReport& b) {
    return std::tie(a.suite, a.check, a.input) < std::tie(b.suite, b.check, b.input);
  });
}

inline nlohmann::ordered_json report_to_json(const CheckReport& r, bool with_timing) {
  nlohmann::ordered_json j;
  j["suite"] = r.suite;
  j["check"] = r.check;
  j["input"] = r.input;
  j["verdict"] = r.verdict;
  j["witnesses"] = r.witnesses;
  j["counts"] = r.counts;
  j["routes"] = r.routes;
  j["checked"] = r.checked;
  if (!r.trunc.empty()) j["truncation"] = r.trunc;
  if (with_timing) j["timing_ms"] = r.timing_ms;
  return j;
}

inline nlohmann::ordered_json reports_to_json(std::vector<CheckReport> rs, bool with_timing) {
  sort_reports(rs);
  nlohmann::ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  std::size_t pass = 0, failed = 0, skipped = 0;
  for (const auto& r : rs) (r.passed() ? pass : r.failed() ? failed : skipped) += 1;
  j["summary"] = {{"pass", pass}, {"fail", failed}, {"skipped", skipped}};
  j["reports"] = nlohmann::ordered_json::array();
  for (const auto& r : rs) j["reports"].push_back(report_to_json(r, with_timing));
  return j;
}

// exit code: 0 all pass, 1 any fail, 2 reserved for configuration errors
inline int exit_code(const std::vector<CheckReport>& rs) {
  for (const auto& r : rs)
    if (r.failed()) return 1;
  return 0;
}

}  // namespace sdot
