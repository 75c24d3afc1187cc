#include "monotone/report.hpp"

#include <fmt/format.h>

namespace monotone {

nlohmann::json to_json(const AuditReport& report) {
  return {{"check", report.check},
          {"passed", report.passed},
          {"samples", report.samples},
          {"seed", report.seed},
          {"witness", report.witness},
          {"details", report.details}};
}

std::string to_table(const AuditReport& report) {
  std::string out = fmt::format("{:<10} {}\n", "check", report.check);
  out += fmt::format("{:<10} {}\n", "result", report.passed ? "pass" : "FAIL");
  out += fmt::format("{:<10} {}\n", "samples", report.samples);
  out += fmt::format("{:<10} {}\n", "seed", report.seed);
  for (const auto& [key, value] : report.details.items())
    out += fmt::format("  {:<24} {}\n", key, value.dump());
  if (!report.witness.is_null()) out += fmt::format("{:<10} {}\n", "witness", report.witness.dump());
  return out;
}

}  // namespace monotone
