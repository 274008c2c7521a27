#include <algorithm>

#include "fairdiv/error.hpp"
#include "fairdiv/protocol.hpp"

namespace fairdiv {

namespace {

// Pick order for reshuffled pieces: higher value first, marked pieces beat
// complete ones on ties, then lower index.
int pick_favorite(const CoreResult& round, int agent, const std::vector<int>& pieces) {
  int best = pieces.front();
  for (int p : pieces) {
    if (p == best) continue;
    const Rational &vp = round.values[agent][p], &vb = round.values[agent][best];
    if (vp > vb ||
        (vp == vb && ((round.pieces[p].marked() && !round.pieces[best].marked()) ||
                      (round.pieces[p].marked() == round.pieces[best].marked() && p < best))))
      best = p;
  }
  return best;
}

}  // namespace

CorrectionChoice choose_correction_target(const ProtocolState& st,
                                          const std::array<int, 4>& core_indexes) {
  CorrectionChoice choice;
  int cutter = st.cores.at(core_indexes[0]).cutter;
  for (int k = 0; k < 4; ++k)
    if (st.cores.at(core_indexes[k]).cutter != cutter)
      throw ContractError("correction candidates need one cutter");
  for (int k = 0; k < 4; ++k) {
    const CoreResult& round = st.cores.at(core_indexes[k]);
    for (int a = 0; a < kAgents; ++a) {
      if (a == cutter) continue;
      choice.gains[k][a] = known_gain(st, round, a);
    }
  }
  for (int k = 0; k < 4; ++k) {
    bool ok = true;
    for (int a = 0; a < kAgents && ok; ++a) {
      // An agent who dominates everyone has no gain and imposes no constraint.
      if (a == cutter || !choice.gains[k][a]) continue;
      Rational rest = 0;
      for (int l = 0; l < 4; ++l)
        if (l != k) rest += *choice.gains[l][a];
      ok = *choice.gains[k][a] <= rest;
    }
    if (ok) {
      choice.index = k;
      return choice;
    }
  }
  throw InvariantError("no correction round satisfies the pigeonhole bound");
}

CorrectionResult run_correction(ProtocolState& st, int core_index, const std::string& step) {
  if (core_index < 0 || core_index >= static_cast<int>(st.cores.size()))
    throw ContractError("bad core index");
  const CoreResult& round = st.cores[core_index];
  if (round.insignificant_piece < 0) throw ContractError("round has no insignificant piece");

  RwOracle& oracle = st.oracle;
  oracle.set_step(step);
  long cuts0 = oracle.ledger().cuts(), evals0 = oracle.ledger().evals();

  CorrectionResult c;
  c.step = step;
  c.core_index = core_index;

  int q = round.insignificant_piece;
  auto top = ordered_marks(round.pieces[q]);
  c.role_a = round.pieces[q].owner;
  c.role_b = top[0].agent == c.role_a ? top[1].agent : top[0].agent;
  c.role_d = round.cutter;
  if (c.role_a == c.role_b || c.role_a == c.role_d || c.role_b == c.role_d)
    throw InvariantError("correction roles collide");
  for (int a = 0; a < kAgents; ++a)
    if (a != c.role_a && a != c.role_b && a != c.role_d) c.role_c = a;

  std::vector<int> partials;
  for (int p = 0; p < kAgents; ++p)
    if (p != q && round.pieces[p].partial()) partials.push_back(p);
  c.two_partials = !partials.empty();

  // The insignificant piece always moves to the other agent marked on it.
  c.piece_of.fill(-1);
  c.piece_of[c.role_b] = q;
  std::vector<int> rest;
  for (int p = 0; p < kAgents; ++p)
    if (p != q) rest.push_back(p);

  if (!c.two_partials) {
    for (int a : {c.role_c, c.role_a, c.role_d}) {
      int p = pick_favorite(round, a, rest);
      c.piece_of[a] = p;
      std::erase(rest, p);
    }
  } else {
    int q2 = partials.front();
    for (const Mark& m : ordered_marks(round.pieces[q2])) {
      if (m.agent == c.role_b) continue;
      c.mover_e = m.agent;
      break;
    }
    if (c.mover_e != c.role_a && c.mover_e != c.role_c)
      throw InvariantError("second partial piece lacks a usable mark");
    c.piece_of[c.mover_e] = q2;
    std::erase(rest, q2);
    int last = c.mover_e == c.role_a ? c.role_c : c.role_a;
    int p = pick_favorite(round, last, rest);
    c.piece_of[last] = p;
    std::erase(rest, p);
    c.piece_of[c.role_d] = rest.front();
  }

  for (int a = 0; a < kAgents; ++a) {
    Piece old_part = round.pieces[round.piece_of[a]].allocated;
    Piece new_part = round.pieces[c.piece_of[a]].allocated;
    st.allocation[a] = unite(subtract(st.allocation[a], old_part), new_part);
  }

  c.delta_cuts = oracle.ledger().cuts() - cuts0;
  c.delta_evals = oracle.ledger().evals() - evals0;
  if (c.delta_cuts != 0 || c.delta_evals != 0)
    throw InvariantError("correction consumed queries");

  st.trace.push_back({step,
                      {{"type", "correction"},
                       {"round", round.step},
                       {"roles",
                        {{"a", c.role_a}, {"b", c.role_b}, {"c", c.role_c}, {"d", c.role_d}}},
                       {"piece_of", c.piece_of},
                       {"queries", {{"cuts", 0}, {"evals", 0}}}}});

  st.corrections.push_back(c);
  return c;
}

}  // namespace fairdiv
