#include <doctest.h>

#include <algorithm>

#include "fairdiv/campaign.hpp"
#include "fairdiv/error.hpp"

using namespace fairdiv;

TEST_SUITE("campaign") {

TEST_CASE("an empty campaign passes vacuously") {
  RunConfig cfg;
  cfg.instances = 0;
  CampaignReport rep = run_campaign(cfg);
  CHECK(rep.outcomes.empty());
  CHECK(rep.completed == 0);
  CHECK(rep.pass());
  CHECK_FALSE(rep.failure.has_value());
}

TEST_CASE("a short campaign meets every promise") {
  RunConfig cfg;
  cfg.seed = 1;
  cfg.instances = 25;
  CampaignReport rep = run_campaign(cfg);
  REQUIRE(rep.outcomes.size() == 25);
  CHECK(rep.completed == 25);
  CHECK(rep.envy_failures == 0);
  CHECK(rep.pass());
  CHECK(rep.max_cuts <= 61);
  CHECK(rep.max_evals <= 110);
  for (size_t i = 0; i < rep.outcomes.size(); ++i) {
    CHECK(rep.outcomes[i].seed == 1 + i);
    CHECK(rep.outcomes[i].complete);
    CHECK(rep.outcomes[i].envy_free);
    CHECK(rep.outcomes[i].audit_pass);
  }
  // Audited rows are tallied by name.
  CHECK(rep.check_counts.at("core.query_bounds") >= 25);
  CHECK(rep.check_counts.at("state.envy_free") >= 25);
  CHECK(rep.summary().find("25") != std::string::npos);
}

TEST_CASE("campaign reports are byte-stable") {
  RunConfig cfg;
  cfg.seed = 11;
  cfg.instances = 8;
  CampaignReport a = run_campaign(cfg);
  CampaignReport b = run_campaign(cfg);
  CHECK(a.to_json().dump() == b.to_json().dump());
}

TEST_CASE("branch bookkeeping") {
  auto names = tracked_branches();
  REQUIRE(names.size() == 5);
  CHECK(std::count(names.begin(), names.end(), "phase1-correction") == 1);
  CHECK(std::count(names.begin(), names.end(), "phase1-exclusion") == 1);
  CHECK(std::count(names.begin(), names.end(), "selfridge-conway") == 1);
  CHECK(std::count(names.begin(), names.end(), "phase2-correction") == 1);
  CHECK(std::count(names.begin(), names.end(), "cut-and-choose") == 1);

  BranchFlags flags;
  for (const auto& n : names) CHECK_FALSE(branch_fired(flags, n));
  flags.phase1_correction = true;
  flags.cut_and_choose = true;
  CHECK(branch_fired(flags, "phase1-correction"));
  CHECK(branch_fired(flags, "cut-and-choose"));
  CHECK_FALSE(branch_fired(flags, "selfridge-conway"));
  auto fired = flags.fired();
  CHECK(fired == std::vector<std::string>{"phase1-correction", "cut-and-choose"});
}

TEST_CASE("adversarial search rejects unknown branches") {
  CHECK_THROWS_AS(find_adversarial("no-such-branch", 10), ContractError);
}

}  // TEST_SUITE
