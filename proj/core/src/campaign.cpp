#include "fairdiv/campaign.hpp"

#include <algorithm>
#include <sstream>

#include "fairdiv/analysis.hpp"
#include "fairdiv/error.hpp"

namespace fairdiv {

const std::vector<std::string>& tracked_branches() {
  static const std::vector<std::string> names{"phase1-correction", "phase1-exclusion",
                                              "selfridge-conway", "phase2-correction",
                                              "cut-and-choose"};
  return names;
}

bool branch_fired(const BranchFlags& br, const std::string& name) {
  std::vector<std::string> fired = br.fired();
  return std::find(fired.begin(), fired.end(), name) != fired.end();
}

Json InstanceOutcome::to_json() const {
  return {{"seed", seed},          {"complete", complete},
          {"envy_free", envy_free}, {"cuts", cuts},
          {"evals", evals},        {"finished_at", finished_at},
          {"branches", branches},  {"audit_pass", audit_pass}};
}

Json CampaignReport::to_json() const {
  Json rows = Json::array();
  for (const InstanceOutcome& o : outcomes) rows.push_back(o.to_json());
  Json branches = Json::object(), checks = Json::object();
  for (const auto& [name, count] : branch_counts) branches[name] = count;
  for (const auto& [name, count] : check_counts) checks[name] = count;
  Json j{{"config",
          {{"seed", config.seed},
           {"instances", config.instances},
           {"audit", config.audit},
           {"gen",
            {{"min_segments", config.gen.min_segments},
             {"max_segments", config.gen.max_segments},
             {"denominator_bound", config.gen.denominator_bound}}}}},
         {"pass", pass()},
         {"completed", completed},
         {"envy_failures", envy_failures},
         {"max_cuts", max_cuts},
         {"max_evals", max_evals},
         {"branch_counts", branches},
         {"check_counts", checks},
         {"outcomes", rows}};
  if (failure) j["failure"] = *failure;
  return j;
}

std::string CampaignReport::summary() const {
  std::ostringstream out;
  out << outcomes.size() << " runs, " << completed << " complete, " << envy_failures
      << " envy failures, max queries " << max_cuts << " cuts / " << max_evals << " evals, audit "
      << (pass() ? "clean" : "FAILED") << "\n";
  for (const auto& [name, count] : branch_counts)
    out << "  branch " << name << ": " << count << "\n";
  return out.str();
}

namespace {

// Greedy shrink of a failing instance: flatten agents to uniform wherever the
// audit failure survives the substitution.
Instance simplify_failure(Instance inst) {
  Valuation uniform({rat(0), rat(1)}, {rat(1)});
  for (int a = 0; a < kAgents; ++a) {
    Instance trial = inst;
    trial[a] = uniform;
    if (!main_protocol(trial, MainOptions{true}).audit.all_pass()) inst = trial;
  }
  return inst;
}

}  // namespace

CampaignReport run_campaign(const RunConfig& cfg) {
  CampaignReport rep;
  rep.config = cfg;
  for (int i = 0; i < cfg.instances; ++i) {
    std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(i);
    Instance inst = gen_instance(seed, cfg.gen);
    RunResult run = main_protocol(inst, MainOptions{cfg.audit});

    InstanceOutcome o;
    o.seed = seed;
    o.complete = run.complete;
    o.envy_free = envy_free(run.allocation, inst);
    o.cuts = run.ledger.cuts();
    o.evals = run.ledger.evals();
    o.finished_at = run.branches.finished_at;
    o.branches = run.branches.fired();
    o.audit_pass = run.audit.all_pass();

    rep.max_cuts = std::max(rep.max_cuts, o.cuts);
    rep.max_evals = std::max(rep.max_evals, o.evals);
    if (o.complete) ++rep.completed;
    if (!o.envy_free) ++rep.envy_failures;
    for (const std::string& b : o.branches) ++rep.branch_counts[b];
    for (const AuditCheck& row : run.audit.checks) ++rep.check_counts[row.name];
    rep.outcomes.push_back(o);

    if (!o.audit_pass) {
      rep.failure = Json{{"seed", seed},
                         {"instance", instance_to_json(inst)},
                         {"simplified", instance_to_json(simplify_failure(inst))},
                         {"audit", run.audit.to_json()}};
      break;
    }
  }
  return rep;
}

namespace {

// Spiky profile over the quarter blocks: one uniform agent, three agents
// with permuted decaying masses. This shape concentrates contention on a
// single piece, which is what the deep Main-line branches need.
Instance structured_instance(std::uint64_t seed) {
  static const std::array<std::array<long, 4>, 6> profiles{{{8, 4, 2, 2},
                                                            {8, 4, 3, 1},
                                                            {6, 6, 2, 2},
                                                            {10, 2, 2, 2},
                                                            {8, 2, 4, 2},
                                                            {4, 8, 2, 2}}};
  SplitMix64 rng(seed);
  std::vector<Valuation> vals;
  vals.push_back(Valuation({rat(0), rat(1)}, {rat(1)}));
  for (int a = 1; a < kAgents; ++a) {
    std::array<long, 4> mass = profiles[rng.below(profiles.size())];
    for (int k = 0; k < 3; ++k) std::swap(mass[k], mass[k + rng.below(4 - k)]);
    std::vector<Point> bp{rat(0), rat(1, 4), rat(1, 2), rat(3, 4), rat(1)};
    std::vector<Rational> dn;
    for (long m : mass) dn.push_back(rat(m, 4));  // mass/16 over a quarter block
    vals.emplace_back(std::move(bp), std::move(dn));
  }
  return {vals[0], vals[1], vals[2], vals[3]};
}

// Dyadic-grid genome for the guided search: three agents as integer masses
// over 32 equal cells (the fourth stays uniform, so she cuts predictably).
struct CellGenome {
  static constexpr int kCells = 32;
  static constexpr long kTotal = 64;
  std::array<std::array<long, kCells>, 3> w{};

  Instance to_instance() const {
    std::vector<Point> bp;
    for (int i = 0; i <= kCells; ++i) bp.push_back(rat(i, kCells));
    std::vector<Valuation> vals;
    vals.push_back(Valuation({rat(0), rat(1)}, {rat(1)}));
    for (const auto& row : w) {
      std::vector<Rational> dn;
      for (long wi : row) dn.push_back(rat(wi * kCells, kTotal));
      vals.emplace_back(bp, dn);
    }
    return {vals[0], vals[1], vals[2], vals[3]};
  }

  static CellGenome random(SplitMix64& rng) {
    CellGenome g;
    for (auto& row : g.w) {
      row.fill(0);
      for (long left = kTotal; left > 0;) {
        long chunk = 1 + static_cast<long>(rng.below(std::min<long>(left, 16)));
        row[rng.below(kCells)] += chunk;
        left -= chunk;
      }
    }
    return g;
  }

  void mutate(SplitMix64& rng) {
    auto& row = w[rng.below(3)];
    for (int tries = 0; tries < 64; ++tries) {
      int from = static_cast<int>(rng.below(kCells));
      if (!row[from]) continue;
      long amount = 1 + static_cast<long>(rng.below(std::min<long>(row[from], 8)));
      row[from] -= amount;
      row[rng.below(kCells)] += amount;
      return;
    }
  }
};

// How far down the main line a run got, with the target branch dwarfing all.
int branch_depth(const std::string& target, const RunResult& r) {
  int sc = r.branches.cores;
  int owner[2] = {-1, -1};
  for (const CoreResult& c : r.cores)
    for (int t = 0; t < 2; ++t)
      if (c.step == "phase2.core." + std::to_string(t + 1)) {
        sc += c.excluded.empty() ? 4 : 2;
        if (c.insignificant_owner >= 0) {
          sc += 2;
          owner[t] = c.insignificant_owner;
        }
      }
  if (r.branches.phase2_reached) sc += 4;
  if (owner[0] >= 0 && owner[0] == owner[1]) sc += 4;
  if (r.branches.phase2_correction) sc += 8;
  if (r.branches.cut_and_choose) sc += 8;
  if (branch_fired(r.branches, target)) sc += 1000;
  return sc;
}

// Flat sampling never reaches the deep phase-two branches; walk toward them,
// scoring each run by progress and restarting when a walk goes stale.
std::optional<Adversarial> climb(const std::string& branch, int budget, std::uint64_t seed0) {
  SplitMix64 rng(seed0 ^ 0x9e3779b97f4a7c15ULL);
  CellGenome cur{};
  int cur_score = -1, stale = 0;
  for (int t = 0; t < budget; ++t) {
    CellGenome cand = cur;
    if (cur_score < 0)
      cand = CellGenome::random(rng);
    else
      cand.mutate(rng);
    Instance inst = cand.to_instance();
    RunResult run = main_protocol(inst, MainOptions{false});
    if (branch_fired(run.branches, branch))
      return Adversarial{seed0 + static_cast<std::uint64_t>(t), "climb", inst};
    int sc = branch_depth(branch, run);
    if (sc >= cur_score) {
      stale = sc > cur_score ? 0 : stale + 1;
      cur = cand;
      cur_score = sc;
    } else {
      ++stale;
    }
    if (stale > 600) {
      cur_score = -1;
      stale = 0;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<Adversarial> find_adversarial(const std::string& branch, int budget,
                                            std::uint64_t seed0) {
  const std::vector<std::string>& tracked = tracked_branches();
  if (std::find(tracked.begin(), tracked.end(), branch) == tracked.end())
    throw ContractError("unknown branch: " + branch);

  struct Family {
    std::string name;
    GenConfig gen;
  };
  static const std::array<Family, 3> grids{Family{"grid-8", {1, 4, 8}},
                                           Family{"grid-4", {1, 2, 4}},
                                           Family{"grid-16", {2, 4, 16}}};

  if (branch == "phase2-correction" || branch == "cut-and-choose")
    return climb(branch, budget, seed0);

  for (int t = 0; t < budget; ++t) {
    std::uint64_t seed = seed0 + static_cast<std::uint64_t>(t);
    int family = t % 4;
    Instance inst =
        family < 3 ? gen_instance(seed, grids[family].gen) : structured_instance(seed);
    RunResult run = main_protocol(inst, MainOptions{false});
    if (branch_fired(run.branches, branch))
      return Adversarial{seed, family < 3 ? grids[family].name : "structured", inst};
  }
  return std::nullopt;
}

}  // namespace fairdiv
