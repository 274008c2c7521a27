#include <doctest.h>

#include "fairdiv/analysis.hpp"
#include "fairdiv/error.hpp"
#include "fairdiv/protocol.hpp"
#include "helpers.hpp"

using namespace fairdiv;
using testutil::contested_instance;
using testutil::disjoint_instance;
using testutil::twin_peak_instance;
using testutil::uniform_instance;

namespace {

Piece iv(const Rational& a, const Rational& b) { return Piece({{a, b}}); }

}  // namespace

TEST_SUITE("correction") {

TEST_CASE("single partial: everyone shifts one seat") {
  auto vals = contested_instance();
  ProtocolState st(&vals);
  run_core(st, 0, {}, {}, false, "round");
  Snapshot before = st.snapshot();

  CorrectionResult c = run_correction(st, 0, "fix");
  CHECK(c.core_index == 0);
  CHECK(c.role_a == 1);
  CHECK(c.role_b == 2);
  CHECK(c.role_c == 3);
  CHECK(c.role_d == 0);
  CHECK_FALSE(c.two_partials);
  CHECK(c.mover_e == -1);
  CHECK(c.piece_of == std::array<int, 4>{2, 1, 0, 3});
  CHECK(c.delta_cuts == 0);
  CHECK(c.delta_evals == 0);

  CHECK(st.allocation[2] == iv(rat(1, 8), rat(1, 4)));
  CHECK(st.allocation[1] == iv(rat(1, 4), rat(1, 2)));
  CHECK(st.allocation[0] == iv(rat(1, 2), rat(3, 4)));
  CHECK(st.allocation[3] == iv(rat(3, 4), rat(1)));
  // The residue is untouched by a reshuffle.
  CHECK(st.residue == iv(rat(0), rat(1, 8)));
  CHECK(envy_free(st.allocation, vals));

  Auditor aud(&vals, true);
  aud.correction(st, before, c);
  AuditReport rep = aud.take();
  CHECK_FALSE(rep.checks.empty());
  CHECK(rep.all_pass());

  CHECK(st.corrections.size() == 1);
  CHECK(st.trace.back().data.at("type") == "correction");
}

TEST_CASE("two partials: the marked mover takes the second one") {
  auto vals = twin_peak_instance();
  ProtocolState st(&vals);
  run_core(st, 0, {}, {}, false, "round");
  Snapshot before = st.snapshot();

  CorrectionResult c = run_correction(st, 0, "fix");
  CHECK(c.role_a == 1);
  CHECK(c.role_b == 2);
  CHECK(c.role_c == 3);
  CHECK(c.role_d == 0);
  CHECK(c.two_partials);
  CHECK(c.mover_e == 1);
  CHECK(c.piece_of == std::array<int, 4>{3, 1, 0, 2});
  CHECK(c.delta_cuts == 0);
  CHECK(c.delta_evals == 0);

  CHECK(st.allocation[2] == iv(rat(3, 16), rat(1, 4)));
  CHECK(st.allocation[1] == iv(rat(3, 8), rat(1, 2)));
  CHECK(st.allocation[3] == iv(rat(1, 2), rat(3, 4)));
  CHECK(st.allocation[0] == iv(rat(3, 4), rat(1)));

  Auditor aud(&vals, true);
  aud.correction(st, before, c);
  CHECK(aud.take().all_pass());
}

TEST_CASE("correction rejects rounds it cannot fix") {
  auto vals = disjoint_instance();
  ProtocolState st(&vals);
  run_core(st, 0, {}, {}, false, "round");
  CHECK_THROWS_AS(run_correction(st, 0, "fix"), ContractError);  // no partial piece
  CHECK_THROWS_AS(run_correction(st, 1, "fix"), ContractError);  // no such round
  CHECK_THROWS_AS(run_correction(st, -1, "fix"), ContractError);
}

TEST_CASE("target choice requires a single cutter") {
  auto vals = contested_instance();
  ProtocolState st(&vals);
  run_core(st, 0, {}, {}, false, "r1");
  run_core(st, 1, {}, {}, false, "r2");
  CHECK_THROWS_AS(choose_correction_target(st, {0, 1, 0, 0}), ContractError);
}

TEST_CASE("reshuffle preference: value, then marked, then index") {
  // Hand-built round: piece 0 is the insignificant partial, piece 1 is
  // marked but complete, pieces 2 and 3 are plain. Agent 3 (role C, first
  // picker) ties pieces 1 and 2 on value; agent 1 (role A) ties 2 and 3.
  auto vals = contested_instance();
  ProtocolState st(&vals);
  st.oracle.set_step("seed");
  CoreResult round;
  round.step = "seed";
  round.cutter = 0;
  std::array<Rational, 5> edge{rat(0), rat(1, 4), rat(1, 2), rat(3, 4), rat(1)};
  for (int p = 0; p < 4; ++p) {
    round.pieces[p].span_lo = edge[p];
    round.pieces[p].span_hi = edge[p + 1];
    round.pieces[p].cake = iv(edge[p], edge[p + 1]);
    round.pieces[p].alloc_lo = edge[p];
    round.pieces[p].allocated = round.pieces[p].cake;
  }
  round.pieces[0].alloc_lo = rat(1, 8);
  round.pieces[0].allocated = iv(rat(1, 8), rat(1, 4));
  round.pieces[0].marks = {{1, 0, rat(1, 8), MarkKind::two}, {2, 0, rat(1, 8), MarkKind::two}};
  round.pieces[1].marks = {{3, 1, rat(1, 4), MarkKind::two}};
  round.pieces[0].owner = 1;
  round.pieces[1].owner = 2;
  round.pieces[2].owner = 3;
  round.pieces[3].owner = 0;
  round.piece_of = {3, 0, 1, 2};
  for (int a = 0; a < 4; ++a) round.handed[a] = round.pieces[round.piece_of[a]].allocated;
  round.values[1] = {rat(1, 2), rat(1, 4), rat(1, 8), rat(1, 8)};
  round.values[3] = {rat(1, 2), rat(1, 4), rat(1, 4), rat(0)};
  round.insignificant_piece = 0;
  round.insignificant_owner = 1;
  round.residue_after = iv(rat(0), rat(1, 8));
  st.cores.push_back(round);

  CorrectionResult c = run_correction(st, 0, "fix");
  CHECK(c.role_c == 3);
  // C's value tie between 1 (marked) and 2 (plain) goes to the marked one.
  CHECK(c.piece_of[3] == 1);
  // A's value tie between the plain pieces 2 and 3 goes to the lower index.
  CHECK(c.piece_of[1] == 2);
  CHECK(c.piece_of == std::array<int, 4>{3, 2, 0, 1});
}

}  // TEST_SUITE
