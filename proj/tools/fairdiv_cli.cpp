#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fairdiv/analysis.hpp"
#include "fairdiv/campaign.hpp"
#include "fairdiv/error.hpp"

namespace {

using fairdiv::Json;

int emit(const Json& j, const std::string& path) {
  if (path.empty()) {
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  std::ofstream out(path);
  if (!out) {
    std::cerr << "cannot write " << path << "\n";
    return 2;
  }
  out << j.dump(2) << "\n";
  return 0;
}

Json load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw fairdiv::ContractError("cannot read " + path);
  return Json::parse(in);
}

void add_gen_options(CLI::App* cmd, fairdiv::GenConfig& gen) {
  cmd->add_option("--min-segments", gen.min_segments, "fewest density segments per agent");
  cmd->add_option("--max-segments", gen.max_segments, "most density segments per agent");
  cmd->add_option("--denominator", gen.denominator_bound,
                  "breakpoints and densities live on the 1/D grid");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"four-agent envy-free division harness"};
  app.require_subcommand(1);

  fairdiv::RunConfig cfg;
  std::string out_path, instance_path, branch;
  bool trace = false;
  int budget = 20000;

  CLI::App* run = app.add_subcommand("run", "run a seeded campaign");
  run->add_option("--seed", cfg.seed, "first seed");
  run->add_option("--instances", cfg.instances, "number of instances");
  run->add_flag("--audit,!--no-audit", cfg.audit, "audit every step (default on)");
  run->add_option("--out", out_path, "write the JSON report here");
  add_gen_options(run, cfg.gen);

  CLI::App* gen = app.add_subcommand("gen", "generate one instance");
  gen->add_option("--seed", cfg.seed, "seed");
  gen->add_option("--out", out_path, "write the instance here");
  add_gen_options(gen, cfg.gen);

  CLI::App* replay = app.add_subcommand("replay", "run one instance from a file");
  replay->add_option("--instance", instance_path, "instance JSON")->required();
  replay->add_flag("--trace", trace, "print the protocol trace, one JSON event per line");
  replay->add_flag("--audit,!--no-audit", cfg.audit, "audit every step (default on)");
  replay->add_option("--out", out_path, "write the JSON report here");

  CLI::App* hunt = app.add_subcommand("hunt", "search for an instance firing a branch");
  hunt->add_option("--branch", branch, "tracked branch name")->required();
  hunt->add_option("--budget", budget, "attempts before giving up");
  hunt->add_option("--seed", cfg.seed, "search seed");
  hunt->add_option("--out", out_path, "write the fixture here");

  try {
    app.parse(argc, argv);

    if (run->parsed()) {
      fairdiv::CampaignReport rep = run_campaign(cfg);
      std::cerr << rep.summary();
      int rc = emit(rep.to_json(), out_path);
      if (rc) return rc;
      bool ok = rep.pass() && rep.envy_failures == 0 &&
                rep.completed == static_cast<int>(rep.outcomes.size());
      return ok ? 0 : 1;
    }

    if (gen->parsed()) return emit(instance_to_json(gen_instance(cfg.seed, cfg.gen)), out_path);

    if (replay->parsed()) {
      fairdiv::Instance inst = fairdiv::instance_from_json(load(instance_path));
      fairdiv::RunResult res = main_protocol(inst, fairdiv::MainOptions{cfg.audit});
      if (trace)
        for (const fairdiv::TraceEvent& ev : res.trace)
          std::cout << Json{{"step", ev.step}, {"data", ev.data}}.dump() << "\n";
      bool ef = envy_free(res.allocation, inst);
      Json report{{"complete", res.complete},
                  {"envy_free", ef},
                  {"cuts", res.ledger.cuts()},
                  {"evals", res.ledger.evals()},
                  {"branches", res.branches.to_json()},
                  {"audit", res.audit.to_json()}};
      int rc = emit(report, out_path);
      if (rc) return rc;
      return res.complete && ef && res.audit.all_pass() ? 0 : 1;
    }

    auto found = fairdiv::find_adversarial(branch, budget, cfg.seed);
    if (!found) {
      std::cerr << "no instance found for " << branch << " within " << budget << " attempts\n";
      return 1;
    }
    Json fixture{{"branch", branch},
                 {"seed", found->seed},
                 {"family", found->family},
                 {"instance", instance_to_json(found->instance)}};
    return emit(fixture, out_path);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
