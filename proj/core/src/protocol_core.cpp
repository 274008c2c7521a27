#include <algorithm>
#include <set>

#include "fairdiv/error.hpp"
#include "fairdiv/protocol.hpp"

namespace fairdiv {

namespace {

Json rat_json(const Rational& r) { return rat_str(r); }

// Best-first order over the live pieces: higher value wins, ties go to the
// lower piece index.
std::vector<int> rank_pieces(const std::array<Rational, kAgents>& row,
                             const std::vector<int>& pool) {
  std::vector<int> order = pool;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (row[a] != row[b]) return row[a] > row[b];
    return a < b;
  });
  return order;
}

}  // namespace

std::vector<Mark> ordered_marks(const PieceState& ps) {
  std::vector<Mark> out = ps.marks;
  std::sort(out.begin(), out.end(), [](const Mark& a, const Mark& b) {
    if (a.position != b.position) return a.position > b.position;
    return a.agent < b.agent;
  });
  return out;
}

std::optional<Insignificant> insignificant_of(const CoreResult& r) {
  if (r.insignificant_piece < 0) return std::nullopt;
  return Insignificant{r.insignificant_owner, r.insignificant_piece,
                       r.pieces[r.insignificant_piece].allocated};
}

CompetitionResult has_competition(int agent, int piece, const std::vector<int>& s,
                                  const std::array<std::vector<int>, kAgents>& rankings,
                                  const std::array<std::array<bool, kAgents>, kAgents>& dominates) {
  CompetitionResult res;
  bool someone_fails_to_dominate = false;
  for (int j : s) {
    if (j == agent) continue;
    if (!dominates[j][agent]) someone_fails_to_dominate = true;
    const auto& rk = rankings[j];
    bool top_two = (!rk.empty() && rk[0] == piece) || (rk.size() > 1 && rk[1] == piece);
    if (top_two) res.rivals.push_back(j);
  }
  res.competing = someone_fails_to_dominate && !res.rivals.empty();
  return res;
}

std::array<std::array<bool, kAgents>, kAgents> known_dominations(const ProtocolState& st) {
  // Entries the agent cannot derive count as "not known to dominate"; the
  // protocol may only act on dominations it can justify from its knowledge.
  std::array<std::array<bool, kAgents>, kAgents> dom{};
  for (int i = 0; i < kAgents; ++i) {
    if (!st.oracle.can_value(i, st.allocation[i])) continue;
    Rational own = st.oracle.known_value(i, st.allocation[i]);
    for (int j = 0; j < kAgents; ++j) {
      if (j == i) continue;
      Piece reach = unite(st.allocation[j], st.residue);
      dom[i][j] = st.oracle.can_value(i, reach) && own >= st.oracle.known_value(i, reach);
    }
  }
  return dom;
}

std::optional<Rational> known_gain(const ProtocolState& st, const CoreResult& call, int agent) {
  // Only this agent's domination row is needed; other rows may be
  // legitimately unknown (exempted agents never learn some trim values).
  Rational own = st.oracle.known_value(agent, st.allocation[agent]);
  Rational best;
  bool any = false;
  for (int j = 0; j < kAgents; ++j) {
    if (j == agent) continue;
    if (own >= st.oracle.known_value(agent, unite(st.allocation[j], st.residue))) continue;
    Rational v = st.oracle.known_value(agent, call.handed[j]);
    if (!any || v > best) best = v;
    any = true;
  }
  if (!any) return std::nullopt;
  return st.oracle.known_value(agent, call.handed[agent]) - best;
}

CoreResult run_core(ProtocolState& st, int cutter, std::vector<int> excluded,
                    std::vector<int> eval_exempt, bool special, const std::string& step) {
  if (cutter < 0 || cutter >= kAgents) throw ContractError("bad cutter");
  for (int e : excluded)
    if (e < 0 || e >= kAgents || e == cutter) throw ContractError("bad exclusion set");
  if (st.residue.empty()) throw ContractError("core on an empty residue");

  std::sort(excluded.begin(), excluded.end());
  std::sort(eval_exempt.begin(), eval_exempt.end());

  CoreResult r;
  r.step = step;
  r.cutter = cutter;
  r.excluded = excluded;
  r.eval_exempt = eval_exempt;
  r.special = special;
  r.residue_before = st.residue;
  r.piece_of.fill(-1);

  RwOracle& oracle = st.oracle;
  oracle.set_step(step);
  long cuts0 = oracle.ledger().cuts(), evals0 = oracle.ledger().evals();

  ResidueFrame frame(st.residue);
  r.residue_value = oracle.known_value(cutter, st.residue);

  // The cutter splits the residue into four pieces she values equally.
  for (int k = 0; k < 3; ++k)
    r.cuts[k] = oracle.frame_cut(cutter, frame, r.residue_value * (k + 1) / 4);
  if (!(r.cuts[0] <= r.cuts[1] && r.cuts[1] <= r.cuts[2]))
    throw InvariantError("cut points out of order");

  std::array<Rational, 5> edge{0, r.cuts[0], r.cuts[1], r.cuts[2], frame.length()};
  for (int p = 0; p < kAgents; ++p) {
    r.pieces[p].span_lo = edge[p];
    r.pieces[p].span_hi = edge[p + 1];
    r.pieces[p].cake = frame.slice(edge[p], edge[p + 1]);
    r.pieces[p].alloc_lo = edge[p];
  }

  // Everyone ranks the four pieces. The cutter's values and each fourth piece
  // derive from cached knowledge, so this bills at most three evals per
  // non-cutter.
  for (int a = 0; a < kAgents; ++a)
    for (int p = 0; p < kAgents; ++p) r.values[a][p] = oracle.eval_piece(a, r.pieces[p].cake);

  std::vector<int> s;
  for (int a = 0; a < kAgents; ++a)
    if (a != cutter && !std::binary_search(excluded.begin(), excluded.end(), a)) s.push_back(a);

  std::vector<int> pool{0, 1, 2, 3};
  auto dom = known_dominations(st);

  auto rankings_over = [&](const std::vector<int>& live) {
    std::array<std::vector<int>, kAgents> rk;
    for (int a = 0; a < kAgents; ++a) rk[a] = rank_pieces(r.values[a], live);
    return rk;
  };

  auto allocate = [&](int agent, int piece, const Rational& from) {
    PieceState& ps = r.pieces[piece];
    if (ps.owner != -1) throw InvariantError("piece allocated twice");
    ps.owner = agent;
    ps.alloc_lo = from;
    ps.allocated = frame.slice(from, ps.span_hi);
    r.piece_of[agent] = piece;
    r.handed[agent] = ps.allocated;
    std::erase(pool, piece);
  };

  // Agents with no competition for their favorite piece settle immediately;
  // each removal can free someone else, so re-sweep until stable.
  for (bool moved = true; moved;) {
    moved = false;
    auto rk = rankings_over(pool);
    for (int a : s) {
      int fav = rk[a][0];
      if (!has_competition(a, fav, s, rk, dom).competing) {
        allocate(a, fav, r.pieces[fav].span_lo);
        r.removed.push_back(a);
        std::erase(s, a);
        moved = true;
        break;
      }
    }
  }

  if (!s.empty()) {
    auto rk = rankings_over(pool);
    std::set<int> favs;
    for (int a : s) favs.insert(rk[a][0]);
    if (favs.size() == s.size()) {
      r.distinct_favorites = true;
      for (int a : s) allocate(a, rk[a][0], r.pieces[rk[a][0]].span_lo);
      s.clear();
    } else {
      // Marking: each remaining agent guards her top pieces with cuts that
      // leave exactly her fallback piece's worth to the right.
      for (int a : s) {
        int second = rk[a][1];
        auto comp_second = has_competition(a, second, s, rk, dom);
        bool two_mark = !comp_second.competing;
        if (!two_mark && comp_second.rivals.size() == 1) {
          int j = comp_second.rivals[0];
          if (rk[j].size() > 1 && rk[j][1] == second) {
            bool a_one = has_competition(a, rk[a][0], s, rk, dom).rivals.size() == 1;
            bool j_one = has_competition(j, rk[j][0], s, rk, dom).rivals.size() == 1;
            two_mark = a_one && j_one;
          }
        }
        int order = two_mark ? 2 : 3;
        MarkContext ctx{a, order, pool, rk[a], r.values[a][rk[a][order - 1]]};
        for (int t = 0; t < order - 1; ++t) {
          int p = rk[a][t];
          Rational m = oracle.mark_cut(a, frame, r.pieces[p].span_lo, r.pieces[p].span_hi,
                                       ctx.target);
          r.pieces[p].marks.push_back({a, p, m, two_mark ? MarkKind::two : MarkKind::three});
        }
        r.mark_contexts.push_back(std::move(ctx));
      }

      std::vector<int> marked;
      for (int p : pool)
        if (r.pieces[p].marked()) marked.push_back(p);
      if (marked.size() > 2) throw InvariantError("more than two marked pieces");
      for (int p : marked)
        if (r.pieces[p].marks.size() < 2)
          throw InvariantError("marked piece with a single mark");

      // Everyone (except the agent who placed it, and anyone excused) learns
      // each marked piece's value up to its second rightmost mark.
      for (int p : marked) {
        Mark m2 = ordered_marks(r.pieces[p])[1];
        for (int a = 0; a < kAgents; ++a) {
          if (a == m2.agent) continue;
          if (std::binary_search(eval_exempt.begin(), eval_exempt.end(), a)) continue;
          oracle.eval_piece(a, frame.slice(m2.position, r.pieces[p].span_hi));
        }
      }

      if (marked.size() == 2 && ordered_marks(r.pieces[marked[0]])[0].agent ==
                                    ordered_marks(r.pieces[marked[1]])[0].agent) {
        // One agent holds the rightmost mark on both pieces: she takes the
        // partial piece she prefers, the other goes to its second marker.
        r.chooser = ordered_marks(r.pieces[marked[0]])[0].agent;
        std::array<Mark, 2> m2{ordered_marks(r.pieces[marked[0]])[1],
                               ordered_marks(r.pieces[marked[1]])[1]};
        std::array<Rational, 2> part{
            oracle.known_value(r.chooser, frame.slice(m2[0].position, r.pieces[marked[0]].span_hi)),
            oracle.known_value(r.chooser, frame.slice(m2[1].position, r.pieces[marked[1]].span_hi))};
        int pick = part[1] > part[0] ? 1 : 0;
        allocate(r.chooser, marked[pick], m2[pick].position);
        allocate(m2[1 - pick].agent, marked[1 - pick], m2[1 - pick].position);
      } else {
        for (int p : marked) {
          auto om = ordered_marks(r.pieces[p]);
          allocate(om[0].agent, p, om[1].position);
        }
      }
    }
  }

  // Leftover agents pick their favorite whole piece: unserved members of s
  // first, then the excluded, in id order. The cutter is indifferent among
  // all four pieces, so she always takes the last one.
  std::vector<int> leftovers;
  for (int a : s)
    if (r.piece_of[a] < 0) leftovers.push_back(a);
  for (int e : excluded) leftovers.push_back(e);
  for (int a : leftovers) {
    int best = rank_pieces(r.values[a], pool)[0];
    allocate(a, best, r.pieces[best].span_lo);
  }
  if (pool.size() != 1) throw InvariantError("expected exactly one piece for the cutter");
  allocate(cutter, pool[0], r.pieces[pool[0]].span_lo);

  std::vector<int> partials;
  for (int p = 0; p < kAgents; ++p)
    if (r.pieces[p].partial()) partials.push_back(p);
  if (partials.size() == 1) {
    r.insignificant_piece = partials[0];
  } else if (partials.size() > 1) {
    int best = partials[0];
    Rational bestv = oracle.known_value(cutter, r.pieces[best].allocated);
    for (size_t i = 1; i < partials.size(); ++i) {
      Rational v = oracle.known_value(cutter, r.pieces[partials[i]].allocated);
      if (v < bestv) {
        best = partials[i];
        bestv = v;
      }
    }
    r.insignificant_piece = best;
  }
  if (r.insignificant_piece >= 0)
    r.insignificant_owner = r.pieces[r.insignificant_piece].owner;

  Piece residue_after;
  for (int p : partials)
    residue_after = unite(residue_after, frame.slice(r.pieces[p].span_lo, r.pieces[p].alloc_lo));
  r.residue_after = residue_after;

  for (int a = 0; a < kAgents; ++a) st.allocation[a] = unite(st.allocation[a], r.handed[a]);
  st.residue = residue_after;

  r.delta_cuts = oracle.ledger().cuts() - cuts0;
  r.delta_evals = oracle.ledger().evals() - evals0;

  Json marks = Json::array();
  for (int p = 0; p < kAgents; ++p)
    for (const auto& m : r.pieces[p].marks)
      marks.push_back({{"agent", m.agent},
                       {"piece", m.piece},
                       {"position", rat_json(m.position)},
                       {"kind", m.kind == MarkKind::two ? "2-mark" : "3-mark"}});
  Json insig;
  if (r.insignificant_piece >= 0)
    insig = {{"owner", r.insignificant_owner}, {"piece", r.insignificant_piece}};
  st.trace.push_back(
      {step,
       {{"type", "core"},
        {"cutter", cutter},
        {"excluded", excluded},
        {"cuts", {rat_json(r.cuts[0]), rat_json(r.cuts[1]), rat_json(r.cuts[2])}},
        {"pieces", [&] {
           Json ps = Json::array();
           for (int p = 0; p < kAgents; ++p)
             ps.push_back({{"cake", piece_to_json(r.pieces[p].cake)},
                           {"owner", r.pieces[p].owner},
                           {"allocated", piece_to_json(r.pieces[p].allocated)}});
           return ps;
         }()},
        {"marks", marks},
        {"insignificant", insig},
        {"residue", piece_to_json(r.residue_after)},
        {"queries", {{"cuts", r.delta_cuts}, {"evals", r.delta_evals}}}}});

  st.cores.push_back(r);
  return r;
}

}  // namespace fairdiv
