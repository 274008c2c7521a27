#include <doctest.h>

#include "fairdiv/error.hpp"
#include "fairdiv/oracle.hpp"
#include "helpers.hpp"

using namespace fairdiv;
using testutil::left_heavy;
using testutil::uniform_instance;
using testutil::uniform_val;

namespace {

Piece iv(const Rational& a, const Rational& b) { return Piece({{a, b}}); }

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("ledger requires a step before billing") {
  QueryLedger l;
  CHECK_THROWS_AS(l.bill_cut(), InvariantError);
  CHECK_THROWS_AS(l.bill_eval(), InvariantError);
  CHECK_THROWS_AS(l.set_step(""), ContractError);
  l.set_step("a");
  l.bill_cut();
  l.set_step("a");  // consecutive duplicate collapses
  l.bill_eval();
  l.set_step("b");
  l.set_step("a");  // non-consecutive repeat opens a fresh row
  REQUIRE(l.steps().size() == 3);
  CHECK(l.steps()[0].label == "a");
  CHECK(l.steps()[0].cuts == 1);
  CHECK(l.steps()[0].evals == 1);
  CHECK(l.steps()[1].label == "b");
  CHECK(l.steps()[1].cuts == 0);
  CHECK(l.steps()[2].label == "a");
  CHECK(l.cuts() == 1);
  CHECK(l.evals() == 1);
}

TEST_CASE("cut bills once and teaches both endpoints") {
  auto vals = uniform_instance();
  RwOracle o(&vals);
  o.set_step("s");
  Point y = o.cut(0, rat(0), rat(1, 4));
  CHECK(y == rat(1, 4));
  CHECK(o.ledger().cuts() == 1);
  CHECK(o.ledger().evals() == 0);
  // Both [0, 1/4] and [1/4, 1] are now derivable for free.
  CHECK(o.eval(0, rat(0), rat(1, 4)) == rat(1, 4));
  CHECK(o.eval(0, rat(1, 4), rat(1)) == rat(3, 4));
  CHECK(o.ledger().evals() == 0);
}

TEST_CASE("eval bills fresh queries only") {
  auto vals = uniform_instance();
  RwOracle o(&vals);
  o.set_step("s");
  CHECK(o.eval(1, rat(0), rat(1, 4)) == rat(1, 4));
  CHECK(o.ledger().evals() == 1);
  CHECK(o.eval(1, rat(0), rat(1, 4)) == rat(1, 4));  // repeat is free
  CHECK(o.ledger().evals() == 1);
  CHECK_THROWS_AS(o.eval(1, rat(1, 2), rat(1, 4)), ContractError);
}

TEST_CASE("fourth quarter comes free by complement") {
  auto vals = uniform_instance();
  RwOracle o(&vals);
  o.set_step("s");
  o.eval(2, rat(0), rat(1, 4));
  o.eval(2, rat(1, 4), rat(1, 2));
  o.eval(2, rat(1, 2), rat(3, 4));
  CHECK(o.ledger().evals() == 3);
  CHECK(o.eval(2, rat(3, 4), rat(1)) == rat(1, 4));
  CHECK(o.ledger().evals() == 3);
}

TEST_CASE("unanchored span resolves once an endpoint lands") {
  auto vals = uniform_instance();
  RwOracle o(&vals);
  o.set_step("s");
  // Neither endpoint known: the answer is stashed, not anchored.
  CHECK(o.eval(3, rat(1, 4), rat(1, 2)) == rat(1, 4));
  CHECK(o.ledger().evals() == 1);
  CHECK_FALSE(o.can_value(3, iv(rat(0), rat(1, 4))));
  // Anchoring the left endpoint drains the pending span: F(1/4) and F(1/2)
  // both become known, so [1/2, 1] is free.
  CHECK(o.eval(3, rat(0), rat(1, 4)) == rat(1, 4));
  CHECK(o.ledger().evals() == 2);
  CHECK(o.eval(3, rat(1, 2), rat(1)) == rat(1, 2));
  CHECK(o.ledger().evals() == 2);
  CHECK(o.known_value(3, iv(rat(1, 4), rat(1, 2))) == rat(1, 4));
}

TEST_CASE("eval_piece billing modes") {
  auto vals = uniform_instance();
  Piece p = unite(iv(rat(0), rat(1, 8)), iv(rat(1, 2), rat(5, 8)));
  SUBCASE("by_cache bills per unknown part") {
    RwOracle o(&vals);
    o.set_step("s");
    CHECK(o.eval_piece(0, p) == rat(1, 4));
    CHECK(o.ledger().evals() == 2);
    CHECK(o.eval_piece(0, p) == rat(1, 4));
    CHECK(o.ledger().evals() == 2);
  }
  SUBCASE("always_one bills a single query") {
    RwOracle o(&vals);
    o.set_step("s");
    o.eval(0, rat(0), rat(1, 8));  // leave only one part unknown
    CHECK(o.ledger().evals() == 1);
    CHECK(o.eval_piece(0, p, Billing::always_one) == rat(1, 4));
    CHECK(o.ledger().evals() == 2);
    // Neither endpoint of [1/2,5/8] is anchored, so the atomic answer is
    // stashed: a repeat eval of that exact span is free.
    CHECK(o.eval(0, rat(1, 2), rat(5, 8)) == rat(1, 8));
    CHECK(o.ledger().evals() == 2);
  }
  SUBCASE("always_one refuses to reveal two unknown intervals") {
    RwOracle o(&vals);
    o.set_step("s");
    CHECK_THROWS_AS(o.eval_piece(0, p, Billing::always_one), InvariantError);
  }
}

TEST_CASE("frame cuts and marks bill one cut each") {
  std::array<Valuation, kAgents> vals = uniform_instance();
  RwOracle o(&vals);
  o.set_step("s");
  // Make the residue endpoints known to agent 0 first.
  o.eval(0, rat(0), rat(1, 4));
  o.eval(0, rat(1, 4), rat(1, 2));
  o.eval(0, rat(1, 2), rat(3, 4));
  ResidueFrame frame(unite(iv(rat(0), rat(1, 4)), iv(rat(1, 2), rat(3, 4))));
  long evals0 = o.ledger().evals();

  Rational t = o.frame_cut(0, frame, rat(1, 4));
  CHECK(t == rat(1, 4));
  CHECK(o.ledger().cuts() == 1);

  Rational m = o.mark_cut(0, frame, rat(0), rat(1, 2), rat(1, 8));
  CHECK(m == rat(3, 8));
  CHECK(o.ledger().cuts() == 2);
  CHECK(o.ledger().evals() == evals0);
  // The mark's span value was learned: slice [3/8, 1/2) maps to [5/8, 3/4].
  CHECK(o.known_value(0, iv(rat(5, 8), rat(3, 4))) == rat(1, 8));

  CHECK_THROWS_AS(o.frame_cut(0, frame, rat(2)), ContractError);
  CHECK_THROWS_AS(o.frame_cut(0, frame, rat(-1)), ContractError);
}

TEST_CASE("cache rejects contradictions") {
  KnowledgeCache c;
  c.learn(0, rat(1, 2), rat(1, 3));
  CHECK(c.cdf(0, rat(1, 2)) == rat(1, 3));
  CHECK_THROWS_AS(c.learn(0, rat(1, 2), rat(2, 3)), InvariantError);
  CHECK_THROWS_AS(c.cdf(1, rat(1, 2)), InvariantError);
  CHECK_THROWS_AS(c.value(1, iv(rat(0), rat(1, 2))), InvariantError);
  CHECK(c.can_value(0, iv(rat(0), rat(1, 2))));
  CHECK(c.value(0, iv(rat(1, 2), rat(1))) == rat(2, 3));
  // A contradictory pending span is caught when it resolves.
  c.stash(1, rat(1, 4), rat(1, 2), rat(1, 10));
  c.learn(1, rat(1, 4), rat(0));
  CHECK(c.cdf(1, rat(1, 2)) == rat(1, 10));
  c.stash(1, rat(1, 2), rat(3, 4), rat(1, 10));
  CHECK_THROWS_AS(c.learn(1, rat(3, 4), rat(1)), InvariantError);
}

TEST_CASE("oracle rejects bad agents") {
  auto vals = uniform_instance();
  RwOracle o(&vals);
  o.set_step("s");
  CHECK_THROWS_AS(o.cut(-1, rat(0), rat(1, 2)), ContractError);
  CHECK_THROWS_AS(o.eval(4, rat(0), rat(1, 2)), ContractError);
}

}  // TEST_SUITE
