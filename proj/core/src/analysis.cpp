#include "fairdiv/analysis.hpp"

#include <algorithm>
#include <vector>

#include "fairdiv/error.hpp"

namespace fairdiv {

namespace {

Json rj(const Rational& r) { return Json(rat_str(r)); }

std::vector<int> exact_ranking(const std::array<Rational, kAgents>& row,
                               const std::vector<int>& pool) {
  std::vector<int> order = pool;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (row[a] != row[b]) return row[a] > row[b];
    return a < b;
  });
  return order;
}

bool is_permutation(const std::array<int, kAgents>& piece_of) {
  std::array<bool, kAgents> seen{};
  for (int p : piece_of) {
    if (p < 0 || p >= kAgents || seen[p]) return false;
    seen[p] = true;
  }
  return true;
}

Json trace_prefix(const ProtocolState& st) {
  Json rows = Json::array();
  for (const auto& ev : st.trace) rows.push_back({{"step", ev.step}, {"data", ev.data}});
  return rows;
}

std::string current_step(const ProtocolState& st) {
  return st.oracle.ledger().steps().empty() ? std::string("init") : st.oracle.ledger().step();
}

// Collects one report's rows under a fixed step label, keeping witnesses
// only for failures.
struct Rows {
  AuditReport report;
  std::string step;

  void add(const std::string& name, bool pass, Json witness) {
    report.checks.push_back({name, step, pass, pass ? Json() : std::move(witness)});
  }
};

}  // namespace

EnvyMatrix envy_matrix(const std::array<Piece, kAgents>& allocation,
                       const std::array<Valuation, kAgents>& vals) {
  for (int i = 0; i < kAgents; ++i)
    for (int j = i + 1; j < kAgents; ++j)
      if (!intersect(allocation[i], allocation[j]).empty())
        throw ContractError("allocated pieces overlap");
  EnvyMatrix m;
  for (int i = 0; i < kAgents; ++i)
    for (int j = 0; j < kAgents; ++j) m[i][j] = vals[i].eval(allocation[j]);
  return m;
}

bool envy_free(const std::array<Piece, kAgents>& allocation,
               const std::array<Valuation, kAgents>& vals) {
  EnvyMatrix m = envy_matrix(allocation, vals);
  for (int i = 0; i < kAgents; ++i)
    for (int j = 0; j < kAgents; ++j)
      if (m[i][i] < m[i][j]) return false;
  return true;
}

DominationGraph domination_graph(const std::array<Piece, kAgents>& allocation,
                                 const Piece& residue,
                                 const std::array<Valuation, kAgents>& vals) {
  DominationGraph g{};
  for (int i = 0; i < kAgents; ++i) {
    Rational own = vals[i].eval(allocation[i]);
    for (int j = 0; j < kAgents; ++j) {
      if (j == i) continue;
      g[i][j] = own >= vals[i].eval(unite(allocation[j], residue));
    }
  }
  return g;
}

std::optional<Rational> gain(const std::array<Piece, kAgents>& sub,
                             const std::array<Piece, kAgents>& full, const Piece& residue,
                             int agent, const std::array<Valuation, kAgents>& vals) {
  for (int i = 0; i < kAgents; ++i)
    if (!full[i].contains(sub[i])) throw ContractError("sub piece outside its full piece");
  DominationGraph dom = domination_graph(full, residue, vals);
  std::optional<Rational> best;
  for (int j = 0; j < kAgents; ++j) {
    if (j == agent || dom[agent][j]) continue;
    Rational v = vals[agent].eval(sub[j]);
    if (!best || v > *best) best = v;
  }
  if (!best) return std::nullopt;
  return vals[agent].eval(sub[agent]) - *best;
}

std::optional<Insignificant> exact_insignificant(const CoreResult& r,
                                                 const std::array<Valuation, kAgents>& vals) {
  int best = -1;
  Rational best_v;
  for (int p = 0; p < kAgents; ++p) {
    if (!r.pieces[p].partial()) continue;
    Rational v = vals[r.cutter].eval(r.pieces[p].allocated);
    if (best < 0 || v < best_v) {
      best = p;
      best_v = v;
    }
  }
  if (best < 0) return std::nullopt;
  return Insignificant{r.pieces[best].owner, best, r.pieces[best].allocated};
}

std::array<int, kAgents> current_piece_of(const ProtocolState& st, int core_index) {
  std::array<int, kAgents> po = st.cores.at(core_index).piece_of;
  for (const auto& c : st.corrections)
    if (c.core_index == core_index) po = c.piece_of;
  return po;
}

AuditReport audit_core(const CoreResult& r, const Snapshot& before, const Snapshot& after,
                       const std::array<Valuation, kAgents>& vals) {
  Rows rows;
  rows.step = r.step;
  ResidueFrame frame(r.residue_before);
  Rational total = vals[r.cutter].eval(r.residue_before);

  {  // geometry and bookkeeping of the round hang together
    std::string bad;
    if (r.residue_before != before.residue) bad = "residue mismatch";
    if (bad.empty() && !is_permutation(r.piece_of)) bad = "piece_of not a permutation";
    std::array<Rational, 5> edge{0, r.cuts[0], r.cuts[1], r.cuts[2], frame.length()};
    for (int k = 0; bad.empty() && k < 4; ++k)
      if (edge[k] > edge[k + 1]) bad = "cut points out of order";
    for (int p = 0; bad.empty() && p < kAgents; ++p) {
      const PieceState& ps = r.pieces[p];
      if (ps.span_lo != edge[p] || ps.span_hi != edge[p + 1]) bad = "piece span off its edges";
      else if (ps.cake != frame.slice(ps.span_lo, ps.span_hi)) bad = "piece extent off its span";
      else if (ps.alloc_lo < ps.span_lo || ps.alloc_lo > ps.span_hi) bad = "handed edge off piece";
      else if (ps.allocated != frame.slice(ps.alloc_lo, ps.span_hi)) bad = "handed extent off edge";
      else if (ps.owner < 0 || r.piece_of[ps.owner] != p) bad = "owner disagrees with piece_of";
    }
    Piece trims;
    for (int p = 0; p < kAgents; ++p)
      trims = unite(trims, frame.slice(r.pieces[p].span_lo, r.pieces[p].alloc_lo));
    if (bad.empty() && r.residue_after != trims) bad = "residue not the union of trims";
    if (bad.empty() && after.residue != r.residue_after) bad = "state residue mismatch";
    for (int a = 0; bad.empty() && a < kAgents; ++a) {
      if (r.handed[a] != r.pieces[r.piece_of[a]].allocated) bad = "handed piece mismatch";
      else if (after.allocation[a] != unite(before.allocation[a], r.handed[a]))
        bad = "state allocation mismatch";
    }
    for (int p = 0; bad.empty() && p < kAgents; ++p)
      for (const Mark& m : r.pieces[p].marks) {
        if (m.agent == r.cutter) bad = "cutter placed a mark";
        if (std::binary_search(r.excluded.begin(), r.excluded.end(), m.agent))
          bad = "excluded agent placed a mark";
      }
    rows.add("core.structure", bad.empty(), Json{{"what", bad}});
  }

  {  // the four pieces are exact quarters of the residue to the cutter
    bool ok = true;
    Json w;
    for (int p = 0; p < kAgents && ok; ++p) {
      Rational v = vals[r.cutter].eval(r.pieces[p].cake);
      if (v * 4 != total) {
        ok = false;
        w = Json{{"piece", p}, {"value", rj(v)}, {"residue", rj(total)}};
      }
    }
    rows.add("core.cut_equal_quarters", ok, std::move(w));
  }

  {  // values the agents ranked with match the valuations
    bool ok = true;
    Json w;
    for (int a = 0; a < kAgents && ok; ++a)
      for (int p = 0; p < kAgents && ok; ++p) {
        Rational v = vals[a].eval(r.pieces[p].cake);
        if (r.values[a][p] != v) {
          ok = false;
          w = Json{{"agent", a}, {"piece", p}, {"recorded", rj(r.values[a][p])}, {"exact", rj(v)}};
        }
      }
    rows.add("core.values_equiv", ok, std::move(w));
  }

  {  // at most two marked pieces, two marks each, partial implies marked
    int marked = 0;
    std::string bad;
    for (int p = 0; p < kAgents; ++p) {
      const PieceState& ps = r.pieces[p];
      if (ps.marked() && ++marked > 2) bad = "more than two marked pieces";
      if (ps.marked() && ps.marks.size() < 2) bad = "marked piece with one mark";
      if (ps.partial() && !ps.marked()) bad = "partial piece without marks";
    }
    rows.add("core.marked_lemma", bad.empty(), Json{{"what", bad}});
  }

  {  // marks sit on each marker's top pieces, hit her target exactly, and
    // leave her x-th favorite clean
    bool ok = true;
    Json w;
    for (const MarkContext& mc : r.mark_contexts) {
      std::array<Rational, kAgents> row{};
      for (int p : mc.pool) row[p] = vals[mc.agent].eval(r.pieces[p].cake);
      std::vector<int> rk = exact_ranking(row, mc.pool);
      std::vector<int> marked_by, top(rk.begin(), rk.begin() + (mc.order - 1));
      for (int p = 0; p < kAgents; ++p)
        for (const Mark& m : r.pieces[p].marks)
          if (m.agent == mc.agent) marked_by.push_back(p);
      std::sort(marked_by.begin(), marked_by.end());
      std::sort(top.begin(), top.end());
      bool here = rk == mc.ranking && row[rk[mc.order - 1]] == mc.target && marked_by == top &&
                  r.pieces[rk[mc.order - 1]].marks.empty();
      for (int p : marked_by)
        for (const Mark& m : r.pieces[p].marks)
          if (m.agent == mc.agent &&
              vals[mc.agent].eval(frame.slice(m.position, r.pieces[p].span_hi)) != mc.target)
            here = false;
      if (!here && ok) {
        ok = false;
        w = Json{{"agent", mc.agent}, {"order", mc.order}, {"target", rj(mc.target)}};
      }
    }
    rows.add("core.x_unmarked", ok, std::move(w));
  }

  {  // each marker ends up with at least her x-th favorite's value
    bool ok = true;
    Json w;
    for (const MarkContext& mc : r.mark_contexts) {
      Rational got = vals[mc.agent].eval(r.handed[mc.agent]);
      if (got < mc.target && ok) {
        ok = false;
        w = Json{{"agent", mc.agent}, {"got", rj(got)}, {"target", rj(mc.target)}};
      }
    }
    rows.add("core.i_get_what_i_mark", ok, std::move(w));
  }

  {  // nobody else reaches past a mark, except when its owner chose freely
    bool ok = true;
    Json w;
    for (int p = 0; p < kAgents; ++p)
      for (const Mark& m : r.pieces[p].marks) {
        if (m.agent == r.chooser || r.pieces[p].owner == m.agent) continue;
        if (r.pieces[p].alloc_lo < m.position && ok) {
          ok = false;
          w = Json{{"piece", p},
                   {"marker", m.agent},
                   {"mark", rj(m.position)},
                   {"handed_from", rj(r.pieces[p].alloc_lo)}};
        }
      }
    rows.add("core.no_one_takes_my_shit", ok, std::move(w));
  }

  {  // cutter plus one more agent walk away with exact quarters, untrimmed
    const PieceState& own = r.pieces[r.piece_of[r.cutter]];
    bool cutter_ok = !own.partial() && vals[r.cutter].eval(own.allocated) * 4 == total;
    bool other_ok = false;
    for (int a = 0; a < kAgents; ++a) {
      if (a == r.cutter) continue;
      const PieceState& ps = r.pieces[r.piece_of[a]];
      if (!ps.partial() && vals[r.cutter].eval(ps.allocated) * 4 == total) other_ok = true;
    }
    rows.add("core.property1", cutter_ok && other_ok,
             Json{{"cutter_whole_quarter", cutter_ok}, {"another_whole_quarter", other_ok}});
  }

  if (r.excluded.empty()) {  // the round's own hand-out is envy-free, except
    // that an agent who already dominated another may see her take a better
    // piece uncontested; for such pairs the old surplus must still cover the
    // new piece, i.e. the combined allocation stays envy-free.
    DominationGraph dom = domination_graph(before.allocation, before.residue, vals);
    bool ok = true;
    Json w;
    for (int i = 0; i < kAgents && ok; ++i)
      for (int j = 0; j < kAgents && ok; ++j) {
        bool fine = dom[i][j]
                        ? vals[i].eval(after.allocation[i]) >= vals[i].eval(after.allocation[j])
                        : vals[i].eval(r.handed[i]) >= vals[i].eval(r.handed[j]);
        if (!fine) {
          ok = false;
          w = Json{{"envious", i},
                   {"of", j},
                   {"dominated", dom[i][j]},
                   {"own", rj(vals[i].eval(r.handed[i]))},
                   {"theirs", rj(vals[i].eval(r.handed[j]))}};
        }
      }
    rows.add("core.property2", ok, std::move(w));
  }

  {  // a doubly dominated non-cutter sails through: favorite piece, no marks,
    // three whole pieces out, her dominators tied on any partial piece
    DominationGraph dom = domination_graph(before.allocation, before.residue, vals);
    for (int a = 0; a < kAgents; ++a) {
      if (a == r.cutter) continue;
      std::vector<int> others;
      for (int x = 0; x < kAgents; ++x)
        if (x != r.cutter && x != a) others.push_back(x);
      int b = others[0], c = others[1];
      if (!(dom[b][a] && dom[c][a] && !dom[b][c] && !dom[c][b])) continue;

      const PieceState& ps = r.pieces[r.piece_of[a]];
      bool favorite = true, no_marks = true;
      for (int p = 0; p < kAgents; ++p) {
        if (vals[a].eval(ps.cake) < vals[a].eval(r.pieces[p].cake)) favorite = false;
        for (const Mark& m : r.pieces[p].marks)
          if (m.agent == a) no_marks = false;
      }
      bool clause1 = !ps.partial() && favorite && no_marks;

      int whole = 0;
      for (int p = 0; p < kAgents; ++p)
        if (!r.pieces[p].partial()) ++whole;
      bool clause2 = whole >= 3;

      bool clause3 = true;
      for (int x : {b, c}) {
        int y = x == b ? c : b;
        if (r.pieces[r.piece_of[x]].partial() &&
            vals[y].eval(r.handed[y]) != vals[y].eval(r.handed[x]))
          clause3 = false;
      }
      rows.add("core.property4", clause1 && clause2 && clause3,
               Json{{"dominated", a},
                    {"favorite_whole_unmarked", clause1},
                    {"whole_pieces", whole},
                    {"dominators_tied", clause3}});
    }
  }

  {  // the cutter keeps at most half the residue's value unallocated
    Rational left = vals[r.cutter].eval(r.residue_after);
    rows.add("core.residue_halves", left * 2 <= total,
             Json{{"left", rj(left)}, {"residue", rj(total)}});
  }

  {  // the engine's insignificant pick matches the brute-force one
    auto exact = exact_insignificant(r, vals);
    bool ok = exact ? (r.insignificant_piece == exact->piece && r.insignificant_owner == exact->owner)
                    : r.insignificant_piece < 0;
    rows.add("core.insignificant_equiv", ok,
             Json{{"engine_piece", r.insignificant_piece},
                  {"engine_owner", r.insignificant_owner},
                  {"exact_piece", exact ? exact->piece : -1},
                  {"exact_owner", exact ? exact->owner : -1}});
  }

  {  // per-round query budget
    long cut_cap = r.special ? 5 : 9;
    long eval_cap = r.special ? (r.eval_exempt.size() == 2 ? 10 : 12) : 15;
    rows.add("core.query_bounds", r.delta_cuts <= cut_cap && r.delta_evals <= eval_cap,
             Json{{"cuts", r.delta_cuts},
                  {"evals", r.delta_evals},
                  {"cut_cap", cut_cap},
                  {"eval_cap", eval_cap}});
  }

  return rows.report;
}

void Auditor::check(const ProtocolState& st, const std::string& name, bool pass, Json witness) {
  AuditCheck row{name, current_step(st), pass, Json()};
  if (!pass) {
    witness["trace_prefix"] = trace_prefix(st);
    row.witness = std::move(witness);
  }
  report_.checks.push_back(std::move(row));
}

void Auditor::merge(const ProtocolState& st, AuditReport rows) {
  for (AuditCheck& row : rows.checks) {
    if (!row.pass) row.witness["trace_prefix"] = trace_prefix(st);
    report_.checks.push_back(std::move(row));
  }
}

void Auditor::state_checks(const ProtocolState& st) {
  if (!enabled_) return;

  {  // the pieces plus the residue tile the cake exactly once
    bool ok = true;
    Piece all = st.residue;
    for (int i = 0; i < kAgents && ok; ++i) {
      if (!intersect(st.allocation[i], st.residue).empty()) ok = false;
      for (int j = i + 1; j < kAgents && ok; ++j)
        if (!intersect(st.allocation[i], st.allocation[j]).empty()) ok = false;
      all = unite(all, st.allocation[i]);
    }
    if (all != Piece::whole_cake()) ok = false;
    Json w;
    if (!ok) {
      w = Json{{"residue", piece_to_json(st.residue)}, {"allocation", Json::array()}};
      for (int i = 0; i < kAgents; ++i) w["allocation"].push_back(piece_to_json(st.allocation[i]));
    }
    check(st, "state.partition", ok, std::move(w));
  }

  {  // overall envy-freeness, from the valuations directly
    EnvyMatrix m = envy_matrix(st.allocation, *vals_);
    bool ok = true;
    Json w;
    for (int i = 0; i < kAgents && ok; ++i)
      for (int j = 0; j < kAgents && ok; ++j)
        if (m[i][i] < m[i][j]) {
          ok = false;
          w = Json{{"envious", i}, {"of", j}, {"own", rj(m[i][i])}, {"theirs", rj(m[i][j])}};
        }
    check(st, "state.envy_free", ok, std::move(w));
  }

  {  // cache-derived dominations are sound, and exact wherever derivable
    auto known = known_dominations(st);
    DominationGraph exact = domination_graph(st.allocation, st.residue, *vals_);
    bool ok = true;
    Json w;
    for (int i = 0; i < kAgents && ok; ++i)
      for (int j = 0; j < kAgents && ok; ++j) {
        if (i == j) continue;
        bool derivable = st.oracle.can_value(i, st.allocation[i]) &&
                         st.oracle.can_value(i, unite(st.allocation[j], st.residue));
        if ((known[i][j] && !exact[i][j]) || (derivable && known[i][j] != exact[i][j])) {
          ok = false;
          w = Json{{"from", i},
                   {"to", j},
                   {"known", known[i][j]},
                   {"exact", exact[i][j]},
                   {"derivable", derivable}};
        }
      }
    check(st, "state.domination_equiv", ok, std::move(w));
  }
}

void Auditor::core(const ProtocolState& st, const Snapshot& before, const CoreResult& r) {
  if (!enabled_) return;
  merge(st, audit_core(r, before, st.snapshot(), *vals_));

  DominationGraph dom = domination_graph(st.allocation, st.residue, *vals_);

  // A repeat cutter dominates whoever now holds the insignificant piece of
  // each of her earlier rounds.
  for (int k = 0; k + 1 < static_cast<int>(st.cores.size()); ++k) {
    const CoreResult& early = st.cores[k];
    if (early.cutter != r.cutter || early.insignificant_piece < 0) continue;
    std::array<int, kAgents> po = current_piece_of(st, k);
    int holder = -1;
    for (int a = 0; a < kAgents; ++a)
      if (po[a] == early.insignificant_piece) holder = a;
    bool ok = holder >= 0 && holder != r.cutter && dom[r.cutter][holder];
    check(st, "core.core_domination", ok,
          Json{{"first_round", early.step}, {"cutter", r.cutter}, {"holder", holder}});
  }

  // With a single partial piece the domination lands immediately.
  int partials = 0;
  for (int p = 0; p < kAgents; ++p)
    if (r.pieces[p].partial()) ++partials;
  if (partials == 1 && r.insignificant_owner >= 0 && r.insignificant_owner != r.cutter)
    check(st, "core.single_partial_domination", dom[r.cutter][r.insignificant_owner],
          Json{{"cutter", r.cutter}, {"holder", r.insignificant_owner}});
}

void Auditor::correction(const ProtocolState& st, const Snapshot& before,
                         const CorrectionResult& c) {
  if (!enabled_) return;
  const CoreResult& round = st.cores.at(c.core_index);
  int q = round.insignificant_piece;

  std::array<Piece, kAgents> pre, post;
  for (int a = 0; a < kAgents; ++a) {
    pre[a] = round.pieces[round.piece_of[a]].allocated;
    post[a] = round.pieces[c.piece_of[a]].allocated;
  }

  check(st, "correction.zero_queries", c.delta_cuts == 0 && c.delta_evals == 0,
        Json{{"cuts", c.delta_cuts}, {"evals", c.delta_evals}});

  {  // a clean reshuffle: same extents, new owners, state updated in step
    bool ok = is_permutation(c.piece_of);
    Json w{{"what", "piece_of not a permutation"}};
    for (int a = 0; ok && a < kAgents; ++a)
      if (st.allocation[a] != unite(subtract(before.allocation[a], pre[a]), post[a])) {
        ok = false;
        w = Json{{"what", "state allocation mismatch"}, {"agent", a}};
      }
    if (ok && st.residue != before.residue) {
      ok = false;
      w = Json{{"what", "residue changed"}};
    }
    check(st, "correction.permutation", ok, std::move(w));
  }

  {  // the insignificant piece moved, to an agent marked on it
    int new_owner = -1;
    for (int a = 0; a < kAgents; ++a)
      if (c.piece_of[a] == q) new_owner = a;
    bool marked_it = false;
    for (const Mark& m : round.pieces[q].marks)
      if (m.agent == new_owner) marked_it = true;
    check(st, "correction.property1",
          new_owner >= 0 && new_owner != round.pieces[q].owner && marked_it,
          Json{{"old_owner", round.pieces[q].owner}, {"new_owner", new_owner}});
  }

  {  // holders of their favorite unmarked piece lose nothing
    bool ok = true;
    Json w;
    for (int i = 0; i < kAgents && ok; ++i) {
      if (i == round.cutter) continue;
      const PieceState& held = round.pieces[round.piece_of[i]];
      if (held.marked() || held.partial()) continue;
      bool favorite_unmarked = true;
      for (int p = 0; p < kAgents; ++p)
        if (!round.pieces[p].marked() &&
            vals_->at(i).eval(round.pieces[p].cake) > vals_->at(i).eval(held.cake))
          favorite_unmarked = false;
      if (!favorite_unmarked) continue;
      if (vals_->at(i).eval(post[i]) < vals_->at(i).eval(pre[i])) {
        ok = false;
        w = Json{{"agent", i},
                 {"old", rj(vals_->at(i).eval(pre[i]))},
                 {"new", rj(vals_->at(i).eval(post[i]))}};
      }
    }
    check(st, "correction.property2", ok, std::move(w));
  }

  {  // nobody's gain drops below minus what it was
    bool ok = true;
    Json w;
    for (int i = 0; i < kAgents && ok; ++i) {
      auto g_old = gain(pre, before.allocation, st.residue, i, *vals_);
      auto g_new = gain(post, st.allocation, st.residue, i, *vals_);
      if (g_old && g_new && *g_new < -*g_old) {
        ok = false;
        w = Json{{"agent", i}, {"old_gain", rj(*g_old)}, {"new_gain", rj(*g_new)}};
      }
    }
    check(st, "correction.property3", ok, std::move(w));
  }

  {  // everyone else gets at least her best piece among non-dominated holders
    DominationGraph dom = domination_graph(before.allocation, st.residue, *vals_);
    bool ok = true;
    Json w;
    for (int i = 0; i < kAgents && ok; ++i) {
      if (i == round.cutter) continue;
      bool held_whole_favorite = !round.pieces[round.piece_of[i]].partial();
      if (held_whole_favorite)
        for (int p = 0; p < kAgents; ++p)
          if (!round.pieces[p].partial() &&
              vals_->at(i).eval(round.pieces[p].allocated) > vals_->at(i).eval(pre[i]))
            held_whole_favorite = false;
      if (held_whole_favorite) continue;
      for (int j = 0; j < kAgents && ok; ++j) {
        if (j == i || dom[i][j]) continue;
        if (vals_->at(i).eval(post[i]) < vals_->at(i).eval(pre[j])) {
          ok = false;
          w = Json{{"agent", i},
                   {"got", rj(vals_->at(i).eval(post[i]))},
                   {"former_holder", j},
                   {"their_old", rj(vals_->at(i).eval(pre[j]))}};
        }
      }
    }
    check(st, "correction.secondfav", ok, std::move(w));
  }
}

void Auditor::pigeonhole(const ProtocolState& st, const std::array<int, 4>& rounds,
                         const CorrectionChoice& choice) {
  if (!enabled_) return;
  int cutter = st.cores.at(rounds[0]).cutter;

  std::array<std::array<std::optional<Rational>, kAgents>, 4> exact;
  for (int k = 0; k < 4; ++k)
    for (int a = 0; a < kAgents; ++a) {
      if (a == cutter) continue;
      exact[k][a] = gain(st.cores.at(rounds[k]).handed, st.allocation, st.residue, a, *vals_);
    }

  {  // the engine's gains agree with brute force, definedness included
    bool ok = true;
    Json w;
    for (int k = 0; k < 4 && ok; ++k)
      for (int a = 0; a < kAgents && ok; ++a) {
        if (a == cutter) continue;
        if (choice.gains[k][a].has_value() != exact[k][a].has_value() ||
            (exact[k][a] && *choice.gains[k][a] != *exact[k][a])) {
          ok = false;
          w = Json{{"round", k},
                   {"agent", a},
                   {"engine", choice.gains[k][a] ? rj(*choice.gains[k][a]) : Json()},
                   {"exact", exact[k][a] ? rj(*exact[k][a]) : Json()}};
        }
      }
    check(st, "correction.gain_equiv", ok, std::move(w));
  }

  {  // the chosen round's gains are covered by the other three
    bool ok = choice.index >= 0 && choice.index < 4;
    Json w{{"what", "index out of range"}};
    for (int a = 0; ok && a < kAgents; ++a) {
      if (a == cutter || !exact[choice.index][a]) continue;
      Rational rest = 0;
      bool defined = true;
      for (int l = 0; l < 4; ++l) {
        if (l == choice.index) continue;
        if (!exact[l][a]) defined = false;
        else rest += *exact[l][a];
      }
      if (defined && *exact[choice.index][a] > rest) {
        ok = false;
        w = Json{{"agent", a}, {"gain", rj(*exact[choice.index][a])}, {"others", rj(rest)}};
      }
    }
    check(st, "main.pigeon", ok, std::move(w));
  }
}

void Auditor::dominator_escape(const ProtocolState& st, int agent) {
  if (!enabled_) return;
  DominationGraph dom = domination_graph(st.allocation, st.residue, *vals_);
  bool ok = agent >= 0 && agent < kAgents;
  for (int j = 0; ok && j < kAgents; ++j)
    if (j != agent && !dom[agent][j]) ok = false;
  check(st, "main.dominator_escape", ok, Json{{"agent", agent}});
}

void Auditor::double_domination(const ProtocolState& st) {
  if (!enabled_) return;
  DominationGraph dom = domination_graph(st.allocation, st.residue, *vals_);
  int deg = 0;
  for (int j = 1; j < kAgents; ++j)
    if (dom[0][j]) ++deg;
  check(st, "main.double_domination", deg >= 2, Json{{"out_degree", deg}});
}

void Auditor::exclusion_round(const ProtocolState& st, const std::vector<int>& dominated_before,
                              int cutter) {
  if (!enabled_) return;
  DominationGraph dom = domination_graph(st.allocation, st.residue, *vals_);
  bool ok = false;
  for (int x : dominated_before)
    if (dom[cutter][x]) ok = true;
  Json w{{"cutter", cutter}, {"candidates", dominated_before}};
  check(st, "main.dom_by_d", ok, std::move(w));
}

void Auditor::phase2_roles(const ProtocolState& st, int a, int b, int c, int d) {
  role_a_ = a;
  role_b_ = b;
  role_c_ = c;
  role_d_ = d;
  if (!enabled_) return;
  DominationGraph dom = domination_graph(st.allocation, st.residue, *vals_);
  bool parts = a >= 0 && b >= 0 && c >= 0 && d >= 0 && a + b + c + d == 6 && b < c;
  check(st, "main.phase2_roles", parts && dom[b][a] && dom[c][a],
        Json{{"a", a}, {"b", b}, {"c", c}, {"d", d}});
}

void Auditor::phase2_selection(const ProtocolState& st, int call5, int call6, int target,
                               int picked, const std::optional<Rational>& gain5,
                               const std::optional<Rational>& gain6) {
  if (!enabled_) return;
  auto f5 = insignificant_of(st.cores.at(call5));
  auto f6 = insignificant_of(st.cores.at(call6));
  check(st, "main.phase2_same_f",
        f5 && f6 && f5->owner == target && f6->owner == target &&
            (target == role_b_ || target == role_c_),
        Json{{"target", target},
             {"holder5", f5 ? f5->owner : -1},
             {"holder6", f6 ? f6->owner : -1}});

  auto e5 = gain(st.cores.at(call5).handed, st.allocation, st.residue, target, *vals_);
  auto e6 = gain(st.cores.at(call6).handed, st.allocation, st.residue, target, *vals_);

  check(st, "correction.gain_equiv",
        gain5.has_value() == e5.has_value() && gain6.has_value() == e6.has_value() &&
            (!e5 || *gain5 == *e5) && (!e6 || *gain6 == *e6),
        Json{{"engine5", gain5 ? rj(*gain5) : Json()},
             {"engine6", gain6 ? rj(*gain6) : Json()},
             {"exact5", e5 ? rj(*e5) : Json()},
             {"exact6", e6 ? rj(*e6) : Json()}});

  bool target_ok = e5 && e6 ? picked == (*e5 <= *e6 ? call5 : call6)
                            : !e5 && !e6 && picked == call5;
  check(st, "main.phase2_target", target_ok,
        Json{{"picked", picked},
             {"gain5", e5 ? rj(*e5) : Json()},
             {"gain6", e6 ? rj(*e6) : Json()}});
}

void Auditor::phase2_post(const ProtocolState& st) {
  if (!enabled_ || role_a_ < 0) return;
  DominationGraph dom = domination_graph(st.allocation, st.residue, *vals_);
  bool ok = dom[role_a_][role_b_] && dom[role_a_][role_c_] && dom[role_d_][role_b_] &&
            dom[role_d_][role_c_];
  check(st, "main.phase2_domination", ok,
        Json{{"a_b", dom[role_a_][role_b_]},
             {"a_c", dom[role_a_][role_c_]},
             {"d_b", dom[role_d_][role_b_]},
             {"d_c", dom[role_d_][role_c_]}});
}

void Auditor::selfridge(const ProtocolState& st, const Snapshot& before,
                        const SelfridgeConwayResult& r) {
  if (!enabled_) return;

  {
    bool ok = true;
    Json w;
    for (int i : r.trio)
      for (int j : r.trio)
        if (vals_->at(i).eval(r.handed[i]) < vals_->at(i).eval(r.handed[j]) && ok) {
          ok = false;
          w = Json{{"envious", i}, {"of", j}};
        }
    check(st, "selfridge_conway.envy_free", ok, std::move(w));
  }

  check(st, "selfridge_conway.query_bound", r.delta_cuts <= 5 && r.delta_evals <= 9,
        Json{{"cuts", r.delta_cuts}, {"evals", r.delta_evals}});

  Piece together;
  for (int i : r.trio) together = unite(together, r.handed[i]);
  check(st, "selfridge_conway.complete", together == before.residue && st.residue.empty(),
        Json{{"handed", piece_to_json(together)}, {"residue", piece_to_json(before.residue)}});
}

void Auditor::cut_choose(const ProtocolState& st, const Snapshot& before,
                         const CutChooseResult& r) {
  if (!enabled_) return;
  check(st, "cut_and_choose.queries", r.delta_cuts == 1 && r.delta_evals == 1,
        Json{{"cuts", r.delta_cuts}, {"evals", r.delta_evals}});

  const Valuation& vc = vals_->at(r.cutter);
  const Valuation& vh = vals_->at(r.chooser);
  int take = r.chooser_take;
  bool halves_equal = vc.eval(r.halves[0]) == vc.eval(r.halves[1]);
  bool chooser_happy = vh.eval(r.halves[take]) >= vh.eval(r.halves[1 - take]);
  bool tiles = unite(r.halves[0], r.halves[1]) == before.residue && st.residue.empty();
  check(st, "cut_and_choose.envy_free", halves_equal && chooser_happy && tiles,
        Json{{"halves_equal", halves_equal},
             {"chooser_happy", chooser_happy},
             {"tiles_residue", tiles}});
}

void Auditor::final_checks(const ProtocolState& st, bool aborted) {
  if (!enabled_ || aborted) return;

  check(st, "main.complete", st.residue.empty(), Json{{"residue", piece_to_json(st.residue)}});

  check(st, "main.envy_free", envy_free(st.allocation, *vals_), Json::object());

  const QueryLedger& led = st.oracle.ledger();
  check(st, "main.query_bounds", led.cuts() <= 61 && led.evals() <= 110,
        Json{{"cuts", led.cuts()}, {"evals", led.evals()}});
}

void Auditor::failure(const ProtocolState& st, const std::string& name, Json witness) {
  check(st, name, false, std::move(witness));
}

}  // namespace fairdiv
