#include <doctest.h>

#include "fairdiv/analysis.hpp"
#include "fairdiv/error.hpp"
#include "fairdiv/protocol.hpp"
#include "helpers.hpp"

using namespace fairdiv;
using testutil::left_heavy;
using testutil::right_heavy;
using testutil::uniform_instance;
using testutil::uniform_val;

namespace {

Piece iv(const Rational& a, const Rational& b) { return Piece({{a, b}}); }

bool group_envy_free(const std::array<Piece, kAgents>& alloc,
                     const std::array<Valuation, kAgents>& vals, const std::vector<int>& group) {
  EnvyMatrix em = envy_matrix(alloc, vals);
  for (int i : group)
    for (int j : group)
      if (em[i][i] < em[i][j]) return false;
  return true;
}

}  // namespace

TEST_SUITE("subprotocols") {

TEST_CASE("cut and choose: indifferent chooser keeps the left half") {
  auto vals = uniform_instance();
  ProtocolState st(&vals);
  CutChooseResult r = run_cut_and_choose(st, 1, 2, "split");
  CHECK(r.cut_frame == rat(1, 2));
  CHECK(r.halves[0] == iv(rat(0), rat(1, 2)));
  CHECK(r.halves[1] == iv(rat(1, 2), rat(1)));
  CHECK(r.chooser_take == 0);
  CHECK(r.delta_cuts == 1);
  CHECK(r.delta_evals == 1);
  CHECK(st.allocation[2] == iv(rat(0), rat(1, 2)));
  CHECK(st.allocation[1] == iv(rat(1, 2), rat(1)));
  CHECK(st.residue.empty());
  CHECK(group_envy_free(st.allocation, vals, {1, 2}));
  CHECK(st.trace.back().data.at("type") == "cut_and_choose");
}

TEST_CASE("cut and choose: opinionated chooser grabs the right half") {
  std::array<Valuation, kAgents> vals{uniform_val(), uniform_val(), right_heavy(), uniform_val()};
  ProtocolState st(&vals);
  CutChooseResult r = run_cut_and_choose(st, 1, 2, "split");
  CHECK(r.chooser_take == 1);
  CHECK(st.allocation[2] == iv(rat(1, 2), rat(1)));
  CHECK(r.delta_cuts == 1);
  CHECK(r.delta_evals == 1);
  CHECK(group_envy_free(st.allocation, vals, {1, 2}));
}

TEST_CASE("cut and choose over a gapped residue") {
  auto vals = uniform_instance();
  ProtocolState st(&vals);
  st.residue = unite(iv(rat(0), rat(1, 4)), iv(rat(3, 4), rat(1)));
  // Teach both players the residue's edges, as earlier rounds would have.
  st.oracle.set_step("setup");
  st.oracle.eval(1, rat(0), rat(1, 4));
  st.oracle.eval(1, rat(3, 4), rat(1));
  st.oracle.eval(3, rat(3, 4), rat(1));

  CutChooseResult r = run_cut_and_choose(st, 1, 3, "split");
  CHECK(r.cut_frame == rat(1, 4));
  CHECK(r.halves[0] == iv(rat(0), rat(1, 4)));
  CHECK(r.halves[1] == iv(rat(3, 4), rat(1)));
  CHECK(r.chooser_take == 0);
  CHECK(r.delta_cuts == 1);
  CHECK(r.delta_evals == 1);
  CHECK(st.residue.empty());
  CHECK(group_envy_free(st.allocation, vals, {1, 3}));
}

TEST_CASE("cut and choose argument checks") {
  auto vals = uniform_instance();
  ProtocolState st(&vals);
  CHECK_THROWS_AS(run_cut_and_choose(st, 1, 1, "x"), ContractError);
  CHECK_THROWS_AS(run_cut_and_choose(st, -1, 2, "x"), ContractError);
  st.residue = Piece();
  CHECK_THROWS_AS(run_cut_and_choose(st, 1, 2, "x"), ContractError);
}

TEST_CASE("three-way split without a trim") {
  auto vals = uniform_instance();
  ProtocolState st(&vals);
  SelfridgeConwayResult r = run_selfridge_conway(st, {1, 2, 3}, "split");
  CHECK_FALSE(r.trimmed);
  CHECK(r.cuts[0] == rat(1, 3));
  CHECK(r.cuts[1] == rat(2, 3));
  CHECK(r.first_take == std::array<int, 3>{2, 1, 0});
  CHECK(r.delta_cuts == 2);
  CHECK(r.delta_evals == 4);
  CHECK(st.allocation[1] == iv(rat(2, 3), rat(1)));
  CHECK(st.allocation[2] == iv(rat(1, 3), rat(2, 3)));
  CHECK(st.allocation[3] == iv(rat(0), rat(1, 3)));
  CHECK(st.residue.empty());
  CHECK(group_envy_free(st.allocation, vals, {1, 2, 3}));
}

TEST_CASE("trimmed split with a worthless trim for its divider") {
  std::array<Valuation, kAgents> vals{uniform_val(), uniform_val(), left_heavy(), right_heavy()};
  ProtocolState st(&vals);
  SelfridgeConwayResult r = run_selfridge_conway(st, {1, 2, 3}, "split");
  CHECK(r.trimmed);
  CHECK(r.trim_piece == 0);
  CHECK(r.trim_mark == rat(1, 6));
  CHECK(r.first_take == std::array<int, 3>{1, 0, 2});
  // The trim is worth nothing to its divider: her cuts collapse to the left
  // edge and the whole trim rides as the last sub-piece.
  CHECK(r.trim_thirds[0].empty());
  CHECK(r.trim_thirds[1].empty());
  CHECK(r.trim_thirds[2] == iv(rat(0), rat(1, 6)));
  CHECK(r.trim_take == std::array<int, 3>{0, 2, 1});
  CHECK(r.delta_cuts == 5);
  CHECK(r.delta_evals == 5);
  CHECK(st.allocation[1] == iv(rat(1, 3), rat(2, 3)));
  CHECK(st.allocation[2] == iv(rat(0), rat(1, 3)));
  CHECK(st.allocation[3] == iv(rat(2, 3), rat(1)));
  CHECK(group_envy_free(st.allocation, vals, {1, 2, 3}));
}

TEST_CASE("trimmed split where the last agent takes the trimmed piece") {
  std::array<Valuation, kAgents> vals{uniform_val(), uniform_val(), left_heavy(), left_heavy()};
  ProtocolState st(&vals);
  SelfridgeConwayResult r = run_selfridge_conway(st, {1, 2, 3}, "split");
  CHECK(r.trimmed);
  CHECK(r.trim_piece == 0);
  CHECK(r.trim_mark == rat(1, 6));
  // Last grabs the trimmed piece itself; middle falls back to a kept third.
  CHECK(r.first_take == std::array<int, 3>{2, 1, 0});
  CHECK(r.trim_thirds[0] == iv(rat(0), rat(1, 18)));
  CHECK(r.trim_thirds[1] == iv(rat(1, 18), rat(1, 9)));
  CHECK(r.trim_thirds[2] == iv(rat(1, 9), rat(1, 6)));
  CHECK(r.trim_take == std::array<int, 3>{1, 2, 0});
  // This shape saturates both query bounds.
  CHECK(r.delta_cuts == 5);
  CHECK(r.delta_evals == 9);
  CHECK(st.allocation[3] == unite(iv(rat(0), rat(1, 18)), iv(rat(1, 6), rat(1, 3))));
  CHECK(st.allocation[1] == unite(iv(rat(1, 18), rat(1, 9)), iv(rat(2, 3), rat(1))));
  CHECK(st.allocation[2] == unite(iv(rat(1, 9), rat(1, 6)), iv(rat(1, 3), rat(2, 3))));
  CHECK(group_envy_free(st.allocation, vals, {1, 2, 3}));
}

TEST_CASE("three-way split argument checks") {
  auto vals = uniform_instance();
  ProtocolState st(&vals);
  CHECK_THROWS_AS(run_selfridge_conway(st, {2, 1, 3}, "x"), ContractError);
  CHECK_THROWS_AS(run_selfridge_conway(st, {1, 1, 3}, "x"), ContractError);
  CHECK_THROWS_AS(run_selfridge_conway(st, {1, 2, 4}, "x"), ContractError);
  st.residue = Piece();
  CHECK_THROWS_AS(run_selfridge_conway(st, {1, 2, 3}, "x"), ContractError);
}

}  // TEST_SUITE
