#include "fairdiv/instance.hpp"

#include <algorithm>
#include <vector>

#include "fairdiv/error.hpp"

namespace fairdiv {

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::below(std::uint64_t n) { return n ? next() % n : 0; }

Json instance_to_json(const Instance& inst) {
  Json agents = Json::array();
  for (const Valuation& v : inst) {
    Json bp = Json::array(), dn = Json::array();
    for (const Point& b : v.breakpoints()) bp.push_back(rat_str(b));
    for (const Rational& d : v.densities()) dn.push_back(rat_str(d));
    agents.push_back({{"breakpoints", bp}, {"densities", dn}});
  }
  return {{"agents", agents}};
}

Instance instance_from_json(const Json& j) {
  const Json& agents = j.at("agents");
  if (!agents.is_array() || agents.size() != kAgents)
    throw ContractError("instance needs exactly four agents");
  std::vector<Valuation> vals;
  for (const Json& a : agents) {
    std::vector<Point> bp;
    std::vector<Rational> dn;
    for (const Json& b : a.at("breakpoints")) bp.push_back(rat_parse(b.get<std::string>()));
    for (const Json& d : a.at("densities")) dn.push_back(rat_parse(d.get<std::string>()));
    vals.emplace_back(std::move(bp), std::move(dn));
  }
  return {vals[0], vals[1], vals[2], vals[3]};
}

namespace {

// One sampling attempt for one agent; fails when the exact-mass solve leaves
// the density grid.
bool sample_valuation(SplitMix64& rng, const GenConfig& cfg, std::vector<Valuation>& out) {
  const long d = cfg.denominator_bound;
  int segments =
      cfg.min_segments + static_cast<int>(rng.below(cfg.max_segments - cfg.min_segments + 1));

  std::vector<long> grid;
  for (long g = 1; g < d; ++g) grid.push_back(g);
  for (int k = 0; k + 1 < segments; ++k)
    std::swap(grid[k], grid[k + rng.below(grid.size() - k)]);
  grid.resize(segments - 1);
  std::sort(grid.begin(), grid.end());

  std::vector<long> edge{0};
  edge.insert(edge.end(), grid.begin(), grid.end());
  edge.push_back(d);

  // Numerators n_i with sum n_i * len_i == d^2 make the mass exactly 1.
  std::vector<long> num(segments);
  long spent = 0;
  for (int k = 0; k + 1 < segments; ++k) {
    num[k] = static_cast<long>(rng.below(2 * d + 1));
    spent += num[k] * (edge[k + 1] - edge[k]);
    if (spent > d * d) return false;
  }
  long last_len = edge[segments] - edge[segments - 1];
  long rest = d * d - spent;
  if (rest % last_len != 0) return false;
  num[segments - 1] = rest / last_len;

  std::vector<Point> bp;
  std::vector<Rational> dn;
  for (long e : edge) bp.push_back(rat(e, d));
  for (long n : num) dn.push_back(rat(n, d));
  out.emplace_back(std::move(bp), std::move(dn));
  return true;
}

}  // namespace

Instance gen_instance(std::uint64_t seed, const GenConfig& cfg) {
  if (cfg.denominator_bound < 2) throw ContractError("denominator bound must be at least 2");
  if (cfg.min_segments < 1 || cfg.min_segments > cfg.max_segments ||
      cfg.max_segments > cfg.denominator_bound)
    throw ContractError("segment counts out of range");

  SplitMix64 streams(seed);
  std::vector<Valuation> vals;
  for (int a = 0; a < kAgents; ++a) {
    std::uint64_t sub = streams.next();
    bool done = false;
    for (int attempt = 0; attempt < 200 && !done; ++attempt) {
      SplitMix64 rng(sub + attempt);
      done = sample_valuation(rng, cfg, vals);
    }
    if (!done) throw ContractError("instance generation failed to normalize");
  }
  return {vals[0], vals[1], vals[2], vals[3]};
}

}  // namespace fairdiv
