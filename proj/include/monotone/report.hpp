#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

namespace monotone {

// Outcome of one audit. A failing report always carries a witness that can be
// reproduced from the seed.
struct AuditReport {
  std::string check;
  bool passed = true;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  nlohmann::json witness = nullptr;  // null unless failed (or a confirmed lower-bound witness)
  nlohmann::json details = nlohmann::json::object();
};

nlohmann::json to_json(const AuditReport& report);
std::string to_table(const AuditReport& report);

}  // namespace monotone
