#include <doctest.h>

#include "fairdiv/error.hpp"
#include "fairdiv/instance.hpp"

using namespace fairdiv;

TEST_SUITE("instance") {

TEST_CASE("generation is deterministic in the seed") {
  Instance a = gen_instance(42);
  Instance b = gen_instance(42);
  Instance c = gen_instance(43);
  CHECK(instance_to_json(a) == instance_to_json(b));
  CHECK(instance_to_json(a) != instance_to_json(c));

  GenConfig wide{2, 5, 16};
  CHECK(instance_to_json(gen_instance(7, wide)) == instance_to_json(gen_instance(7, wide)));
  CHECK(instance_to_json(gen_instance(7, wide)) != instance_to_json(gen_instance(7)));
}

TEST_CASE("generated instances respect the grid") {
  GenConfig cfg;  // segments 1..4 on the 1/8 grid
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    CAPTURE(seed);
    Instance inst = gen_instance(seed, cfg);
    for (const Valuation& v : inst) {
      REQUIRE(v.eval(rat(0), rat(1)) == rat(1));
      size_t segments = v.densities().size();
      CHECK(segments >= 1);
      CHECK(segments <= 4);
      for (const Point& b : v.breakpoints()) CHECK(b.get_den() <= 8);
      for (const Rational& d : v.densities()) CHECK(d.get_den() <= 8);
    }
  }
}

TEST_CASE("json round trip") {
  Instance inst = gen_instance(9, {2, 4, 12});
  Json j = instance_to_json(inst);
  Instance back = instance_from_json(j);
  CHECK(instance_to_json(back) == j);
}

TEST_CASE("malformed json is rejected") {
  CHECK_THROWS_AS(instance_from_json(Json::parse(R"({"agents":[]})")), ContractError);
  // Three agents only.
  Json j = instance_to_json(gen_instance(1));
  j["agents"].erase(3);
  CHECK_THROWS_AS(instance_from_json(j), ContractError);
  // Mass off by one segment: the valuation constructor rejects it.
  Json k = instance_to_json(gen_instance(1));
  k["agents"][0] = {{"breakpoints", {"0", "1"}}, {"densities", {"2"}}};
  CHECK_THROWS_AS(instance_from_json(k), ContractError);
}

TEST_CASE("config bounds are enforced") {
  CHECK_THROWS_AS(gen_instance(1, GenConfig{0, 4, 8}), ContractError);
  CHECK_THROWS_AS(gen_instance(1, GenConfig{3, 2, 8}), ContractError);
  CHECK_THROWS_AS(gen_instance(1, GenConfig{1, 9, 8}), ContractError);
  CHECK_THROWS_AS(gen_instance(1, GenConfig{1, 1, 1}), ContractError);
}

TEST_CASE("splitmix stream is stable") {
  SplitMix64 rng(1);
  std::uint64_t first = rng.next();
  SplitMix64 rng2(1);
  CHECK(rng2.next() == first);
  CHECK(rng2.next() != first);
  for (int i = 0; i < 100; ++i) CHECK(rng.below(7) < 7);
}

}  // TEST_SUITE
