#include <algorithm>

#include "fairdiv/error.hpp"
#include "fairdiv/protocol.hpp"

namespace fairdiv {

CutChooseResult run_cut_and_choose(ProtocolState& st, int cutter, int chooser,
                                   const std::string& step) {
  if (cutter < 0 || cutter >= kAgents || chooser < 0 || chooser >= kAgents || cutter == chooser)
    throw ContractError("cut and choose needs two distinct agents");
  if (st.residue.empty()) throw ContractError("cut and choose on an empty residue");

  RwOracle& oracle = st.oracle;
  oracle.set_step(step);
  long cuts0 = oracle.ledger().cuts(), evals0 = oracle.ledger().evals();

  CutChooseResult r;
  r.step = step;
  r.cutter = cutter;
  r.chooser = chooser;

  ResidueFrame frame(st.residue);
  Rational v = oracle.known_value(cutter, st.residue);
  r.cut_frame = oracle.frame_cut(cutter, frame, v / 2);
  r.halves[0] = frame.slice(0, r.cut_frame);
  r.halves[1] = frame.slice(r.cut_frame, frame.length());

  // One billed eval answers the first half; the second derives from it.
  Rational h0 = oracle.eval_piece(chooser, r.halves[0], Billing::always_one);
  Rational h1 = oracle.known_value(chooser, r.halves[1]);
  r.chooser_take = h0 >= h1 ? 0 : 1;

  r.handed[chooser] = r.halves[r.chooser_take];
  r.handed[cutter] = r.halves[1 - r.chooser_take];
  for (int a = 0; a < kAgents; ++a) st.allocation[a] = unite(st.allocation[a], r.handed[a]);
  st.residue = Piece();

  r.delta_cuts = oracle.ledger().cuts() - cuts0;
  r.delta_evals = oracle.ledger().evals() - evals0;

  st.trace.push_back({step,
                      {{"type", "cut_and_choose"},
                       {"cutter", cutter},
                       {"chooser", chooser},
                       {"cut", rat_str(r.cut_frame)},
                       {"chooser_take", r.chooser_take},
                       {"queries", {{"cuts", r.delta_cuts}, {"evals", r.delta_evals}}}}});
  return r;
}

SelfridgeConwayResult run_selfridge_conway(ProtocolState& st, const std::array<int, 3>& trio,
                                           const std::string& step) {
  if (!(0 <= trio[0] && trio[0] < trio[1] && trio[1] < trio[2] && trio[2] < kAgents))
    throw ContractError("trio must be three distinct agents in ascending order");
  if (st.residue.empty()) throw ContractError("three-way split of an empty residue");

  RwOracle& oracle = st.oracle;
  oracle.set_step(step);
  long cuts0 = oracle.ledger().cuts(), evals0 = oracle.ledger().evals();

  SelfridgeConwayResult r;
  r.step = step;
  r.trio = trio;
  r.first_take = {-1, -1, -1};
  r.trim_take = {-1, -1, -1};
  const int divider = trio[0], middle = trio[1], last = trio[2];

  ResidueFrame frame(st.residue);
  Rational total = oracle.known_value(divider, st.residue);
  r.cuts[0] = oracle.frame_cut(divider, frame, total / 3);
  r.cuts[1] = oracle.frame_cut(divider, frame, total * 2 / 3);
  std::array<Rational, 4> edge{0, r.cuts[0], r.cuts[1], frame.length()};
  for (int k = 0; k < 3; ++k) r.thirds[k] = frame.slice(edge[k], edge[k + 1]);

  // The middle agent trims her favorite third down to her second favorite.
  std::array<Rational, 3> vm;
  for (int k = 0; k < 3; ++k) vm[k] = oracle.eval_piece(middle, r.thirds[k]);
  std::array<int, 3> order{0, 1, 2};
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (vm[a] != vm[b]) return vm[a] > vm[b];
    return a < b;
  });
  std::array<Rational, 3> middle_kept = vm;
  if (vm[order[0]] > vm[order[1]]) {
    r.trimmed = true;
    r.trim_piece = order[0];
    r.trim_mark = oracle.mark_cut(middle, frame, edge[r.trim_piece], edge[r.trim_piece + 1],
                                  vm[order[1]]);
    middle_kept[r.trim_piece] = vm[order[1]];
  }

  std::array<Piece, 3> kept = r.thirds;
  if (r.trimmed) kept[r.trim_piece] = frame.slice(r.trim_mark, edge[r.trim_piece + 1]);

  std::array<Rational, 3> vl;
  for (int k = 0; k < 3; ++k) vl[k] = oracle.eval_piece(last, kept[k]);

  // Picks: last, then middle (forced onto the trimmed piece while it stands),
  // then the divider takes the untrimmed leftover.
  std::vector<int> open{0, 1, 2};
  auto best = [&open](const std::array<Rational, 3>& val) {
    int b = open.front();
    for (int k : open)
      if (val[k] > val[b]) b = k;
    return b;
  };
  r.first_take[2] = best(vl);
  std::erase(open, r.first_take[2]);
  r.first_take[1] = (r.trimmed && r.first_take[2] != r.trim_piece) ? r.trim_piece
                                                                   : best(middle_kept);
  std::erase(open, r.first_take[1]);
  r.first_take[0] = open.front();
  if (r.trimmed && r.first_take[0] == r.trim_piece)
    throw InvariantError("divider ended up with the trimmed piece");

  std::array<Piece, kAgents> handed;
  for (int i = 0; i < 3; ++i) handed[trio[i]] = kept[r.first_take[i]];

  if (r.trimmed) {
    Piece t = frame.slice(edge[r.trim_piece], r.trim_mark);
    const int holder = r.first_take[2] == r.trim_piece ? last : middle;
    const int divider2 = holder == last ? middle : last;

    ResidueFrame tf(t);
    Rational tv = oracle.known_value(divider2, t);
    Rational t1 = oracle.frame_cut(divider2, tf, tv / 3);
    Rational t2 = oracle.frame_cut(divider2, tf, tv * 2 / 3);
    std::array<Rational, 4> tedge{0, t1, t2, tf.length()};
    for (int k = 0; k < 3; ++k) r.trim_thirds[k] = tf.slice(tedge[k], tedge[k + 1]);

    auto trio_slot = [&](int agent) {
      return agent == divider ? 0 : agent == middle ? 1 : 2;
    };
    std::vector<int> left{0, 1, 2};
    auto take = [&](int agent, int k) {
      r.trim_take[trio_slot(agent)] = k;
      handed[agent] = unite(handed[agent], r.trim_thirds[k]);
      std::erase(left, k);
    };

    std::array<Rational, 3> vh;
    for (int k = 0; k < 3; ++k) vh[k] = oracle.eval_piece(holder, r.trim_thirds[k]);
    int pick = 0;
    for (int k : left)
      if (vh[k] > vh[pick]) pick = k;
    take(holder, pick);

    std::array<Rational, 2> vd;
    for (int i = 0; i < 2; ++i) vd[i] = oracle.eval_piece(divider, r.trim_thirds[left[i]]);
    take(divider, vd[1] > vd[0] ? left[1] : left[0]);

    take(divider2, left.front());
  }

  r.handed = handed;
  for (int a = 0; a < kAgents; ++a) st.allocation[a] = unite(st.allocation[a], handed[a]);
  st.residue = Piece();

  r.delta_cuts = oracle.ledger().cuts() - cuts0;
  r.delta_evals = oracle.ledger().evals() - evals0;

  st.trace.push_back({step,
                      {{"type", "selfridge_conway"},
                       {"trio", trio},
                       {"trimmed", r.trimmed},
                       {"first_take", r.first_take},
                       {"trim_take", r.trim_take},
                       {"queries", {{"cuts", r.delta_cuts}, {"evals", r.delta_evals}}}}});
  return r;
}

}  // namespace fairdiv
