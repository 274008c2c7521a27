#pragma once

#include <cstdint>

#include "fairdiv/json.hpp"
#include "fairdiv/oracle.hpp"
#include "fairdiv/valuation.hpp"

namespace fairdiv {

using Instance = std::array<Valuation, kAgents>;

Json instance_to_json(const Instance& inst);
Instance instance_from_json(const Json& j);

// splitmix64: small deterministic generator for instance sampling.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  std::uint64_t below(std::uint64_t n);

 private:
  std::uint64_t state_;
};

struct GenConfig {
  int min_segments = 1;
  int max_segments = 4;
  int denominator_bound = 8;  // breakpoints and densities live on the 1/bound grid
};

// Deterministic in seed. Breakpoints and densities are multiples of
// 1/denominator_bound; the last segment's density is solved exactly so every
// agent's total mass is 1, retrying with a fresh sub-seed when the solve
// fails the grid.
Instance gen_instance(std::uint64_t seed, const GenConfig& cfg = {});

}  // namespace fairdiv
