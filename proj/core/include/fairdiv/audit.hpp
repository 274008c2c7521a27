#pragma once

#include <string>
#include <vector>

#include "fairdiv/json.hpp"

namespace fairdiv {

// One verified property instance. Witness stays null unless the check failed,
// in which case it carries the exact values that broke it.
struct AuditCheck {
  std::string name;
  std::string step;
  bool pass = true;
  Json witness;
};

struct AuditReport {
  std::vector<AuditCheck> checks;

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  Json to_json() const {
    Json rows = Json::array();
    for (const auto& c : checks) {
      Json row{{"name", c.name}, {"step", c.step}, {"pass", c.pass}};
      if (!c.pass) row["witness"] = c.witness;
      rows.push_back(std::move(row));
    }
    return {{"pass", all_pass()}, {"checks", rows}};
  }
};

}  // namespace fairdiv
