#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fairdiv/instance.hpp"
#include "fairdiv/protocol.hpp"

namespace fairdiv {

struct RunConfig {
  std::uint64_t seed = 1;
  int instances = 100;
  bool audit = true;
  GenConfig gen;
};

struct InstanceOutcome {
  std::uint64_t seed = 0;
  bool complete = false;
  bool envy_free = false;
  long cuts = 0;
  long evals = 0;
  std::string finished_at;
  std::vector<std::string> branches;
  bool audit_pass = true;
  Json to_json() const;
};

struct CampaignReport {
  RunConfig config;
  std::vector<InstanceOutcome> outcomes;
  long max_cuts = 0;
  long max_evals = 0;
  int completed = 0;
  int envy_failures = 0;
  std::map<std::string, long> branch_counts;
  std::map<std::string, long> check_counts;
  std::optional<Json> failure;  // first audit failure, with its witness instance

  bool pass() const { return !failure.has_value(); }
  Json to_json() const;
  std::string summary() const;
};

// Main-line branches the harness tracks for coverage, in a fixed order.
const std::vector<std::string>& tracked_branches();
bool branch_fired(const BranchFlags& br, const std::string& name);

// Runs seeds config.seed .. config.seed + instances - 1 in order; stops at
// the first audit failure and records a greedily simplified witness.
CampaignReport run_campaign(const RunConfig& cfg);

struct Adversarial {
  std::uint64_t seed = 0;
  std::string family;
  Instance instance;
};

// Seeded search over small rational grids for an instance whose run fires
// `branch`; returns the first hit within `budget` attempts.
std::optional<Adversarial> find_adversarial(const std::string& branch, int budget,
                                            std::uint64_t seed0 = 1);

}  // namespace fairdiv
