#include <benchmark/benchmark.h>

#include "fairdiv/analysis.hpp"
#include "fairdiv/campaign.hpp"

namespace {

using namespace fairdiv;

void BM_MainProtocol(benchmark::State& state) {
  Instance inst = gen_instance(42, {1, 4, 8});
  MainOptions opt{state.range(0) != 0};
  for (auto _ : state) {
    RunResult r = main_protocol(inst, opt);
    benchmark::DoNotOptimize(r.complete);
  }
}
BENCHMARK(BM_MainProtocol)->Arg(0)->Arg(1)->ArgNames({"audit"});

void BM_GenInstance(benchmark::State& state) {
  std::uint64_t seed = 1;
  for (auto _ : state) {
    Instance inst = gen_instance(seed++, {1, 4, 16});
    benchmark::DoNotOptimize(inst[0].breakpoints().size());
  }
}
BENCHMARK(BM_GenInstance);

void BM_EvalPiece(benchmark::State& state) {
  Instance inst = gen_instance(7, {4, 4, 16});
  Piece p = unite(Piece::interval(rat(1, 16), rat(5, 16)), Piece::interval(rat(1, 2), rat(7, 8)));
  for (auto _ : state) {
    Rational v = inst[0].eval(p);
    benchmark::DoNotOptimize(v.get_num());
  }
}
BENCHMARK(BM_EvalPiece);

void BM_CutQuery(benchmark::State& state) {
  Instance inst = gen_instance(7, {4, 4, 16});
  for (auto _ : state) {
    Point y = inst[1].cut(rat(1, 16), rat(1, 3));
    benchmark::DoNotOptimize(y.get_num());
  }
}
BENCHMARK(BM_CutQuery);

void BM_Campaign(benchmark::State& state) {
  RunConfig cfg;
  cfg.instances = 10;
  cfg.audit = state.range(0) != 0;
  for (auto _ : state) {
    CampaignReport rep = run_campaign(cfg);
    benchmark::DoNotOptimize(rep.max_cuts);
  }
}
BENCHMARK(BM_Campaign)->Arg(0)->Arg(1)->ArgNames({"audit"});

}  // namespace

BENCHMARK_MAIN();
