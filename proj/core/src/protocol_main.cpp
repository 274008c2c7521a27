#include <algorithm>
#include <set>
#include <utility>

#include "fairdiv/analysis.hpp"
#include "fairdiv/error.hpp"
#include "fairdiv/protocol.hpp"

namespace fairdiv {

std::vector<std::string> BranchFlags::fired() const {
  std::vector<std::string> out;
  if (phase1_correction) out.push_back("phase1-correction");
  if (phase1_exclusion) out.push_back("phase1-exclusion");
  if (selfridge_conway) out.push_back("selfridge-conway");
  if (phase2_correction) out.push_back("phase2-correction");
  if (cut_and_choose) out.push_back("cut-and-choose");
  return out;
}

Json BranchFlags::to_json() const {
  return {{"phase1_correction", phase1_correction},
          {"phase1_exclusion", phase1_exclusion},
          {"selfridge_conway", selfridge_conway},
          {"phase2_reached", phase2_reached},
          {"phase2_exclusion", phase2_exclusion},
          {"phase2_correction", phase2_correction},
          {"cut_and_choose", cut_and_choose},
          {"cores", cores},
          {"finished_at", finished_at}};
}

RunResult main_protocol(const std::array<Valuation, kAgents>& vals, const MainOptions& opt) {
  ProtocolState st(&vals);
  Auditor aud(&vals, opt.audit);
  BranchFlags br;
  bool aborted = false;
  bool done = false;

  auto finish = [&](const std::string& where) {
    br.finished_at = where;
    done = true;
  };

  auto core_round = [&](int cutter, std::vector<int> excluded, std::vector<int> exempt,
                        bool special, const std::string& step) {
    Snapshot before = st.snapshot();
    CoreResult r = run_core(st, cutter, std::move(excluded), std::move(exempt), special, step);
    ++br.cores;
    aud.core(st, before, r);
    aud.state_checks(st);
    if (r.complete()) finish(step);
    return r;
  };

  try {
    // Phase one: agent 0 cuts four times in a row.
    std::array<int, 4> first_rounds{};
    for (int k = 0; k < 4 && !done; ++k) {
      first_rounds[k] = static_cast<int>(st.cores.size());
      core_round(0, {}, {}, false, "phase1.core." + std::to_string(k + 1));
    }

    if (!done) {
      // If one agent was stuck with the insignificant piece every time, move
      // one of them to a different holder before the fifth round; then each
      // holder becomes dominated by agent 0.
      std::set<int> holders;
      for (int idx : first_rounds) {
        auto ins = insignificant_of(st.cores[idx]);
        if (!ins) throw InvariantError("open round without an insignificant piece");
        holders.insert(ins->owner);
      }
      if (holders.size() == 1) {
        // An undefined gain means that agent dominates everyone: reshuffling
        // a round could take pieces she counts on, but handing the residue to
        // the other three can never hurt her. Same exit as the dominant
        // cutter below, just triggered from the other side.
        int lord = -1;
        for (int x = 1; x < kAgents && lord < 0; ++x)
          if (!known_gain(st, st.cores[first_rounds[0]], x)) lord = x;
        if (lord >= 0) {
          br.selfridge_conway = true;
          std::array<int, 3> trio{};
          for (int x = 0, t = 0; x < kAgents; ++x)
            if (x != lord) trio[t++] = x;
          st.oracle.set_step("phase1.selfridge_conway");
          aud.dominator_escape(st, lord);
          Snapshot before = st.snapshot();
          SelfridgeConwayResult r = run_selfridge_conway(st, trio, "phase1.selfridge_conway");
          aud.selfridge(st, before, r);
          aud.state_checks(st);
          finish("phase1.selfridge_conway");
        } else {
          br.phase1_correction = true;
          st.oracle.set_step("phase1.correction");
          CorrectionChoice choice = choose_correction_target(st, first_rounds);
          aud.pigeonhole(st, first_rounds, choice);
          Snapshot before = st.snapshot();
          CorrectionResult c = run_correction(st, first_rounds[choice.index], "phase1.correction");
          aud.correction(st, before, c);
          aud.state_checks(st);
        }
      }
      if (!done) {
        core_round(0, {}, {}, false, "phase1.core.5");
        aud.double_domination(st);
      }
    }

    if (!done) {
      auto dom = known_dominations(st);
      std::vector<int> dominated, loose;
      for (int x = 1; x < kAgents; ++x) (dom[0][x] ? dominated : loose).push_back(x);
      if (!loose.empty()) {
        // Someone escaped agent 0: she cuts once more with agent 0 out of
        // competition, which lands a second domination on a covered agent.
        br.phase1_exclusion = true;
        int e = loose.front();
        core_round(e, {0}, {}, true, "phase1.core.exclusion");
        aud.exclusion_round(st, dominated, e);
      } else {
        // Agent 0 dominates everyone; the other three split the residue.
        br.selfridge_conway = true;
        Snapshot before = st.snapshot();
        SelfridgeConwayResult r = run_selfridge_conway(st, {1, 2, 3}, "phase1.selfridge_conway");
        aud.selfridge(st, before, r);
        aud.state_checks(st);
        finish("phase1.selfridge_conway");
      }
    }

    if (!done) {
      br.phase2_reached = true;
      auto dom = known_dominations(st);
      int a = -1;
      for (int i = 0; i < kAgents && a < 0; ++i) {
        int deg = 0;
        for (int j = 0; j < kAgents; ++j)
          if (j != i && dom[j][i]) ++deg;
        if (deg >= 2) a = i;
      }
      if (a < 0) throw InvariantError("phase two without a doubly dominated agent");
      std::vector<int> doms;
      for (int j = 0; j < kAgents; ++j)
        if (j != a && dom[j][a]) doms.push_back(j);
      int b = doms[0], c = doms[1];
      int d = 6 - a - b - c;
      aud.phase2_roles(st, a, b, c, d);
      st.trace.push_back(
          {st.oracle.ledger().step(), Json{{"type", "phase2.roles"}, {"a", a}, {"b", b}, {"c", c}, {"d", d}}});

      // The uninvolved agent cuts twice; a dominator who already dominates
      // both others sits out the competition.
      std::array<int, 2> rounds{-1, -1};
      for (int t = 0; t < 2 && !done; ++t) {
        auto dom2 = known_dominations(st);
        std::vector<int> excl;
        for (int x : {b, c}) {
          int other = x == b ? c : b;
          if (dom2[x][a] && dom2[x][other]) excl.push_back(x);
        }
        if (!excl.empty()) br.phase2_exclusion = true;
        std::vector<int> exempt;
        if (t == 1) exempt = {std::min(a, d), std::max(a, d)};
        rounds[t] = static_cast<int>(st.cores.size());
        core_round(d, excl, exempt, true, "phase2.core." + std::to_string(t + 1));
      }

      if (!done) {
        // Covered when the two rounds stuck different agents with the
        // insignificant piece; otherwise reshuffle the cheaper round.
        auto f5 = insignificant_of(st.cores[rounds[0]]);
        auto f6 = insignificant_of(st.cores[rounds[1]]);
        if (!f5 || !f6) throw InvariantError("open phase-two round without an insignificant piece");
        if (f5->owner == f6->owner) {
          int f = f5->owner;
          if (f != b && f != c) throw InvariantError("repeat insignificant holder is not B or C");
          auto g5 = known_gain(st, st.cores[rounds[0]], f);
          auto g6 = known_gain(st, st.cores[rounds[1]], f);
          // Definedness depends on the state alone, so it matches across
          // rounds.
          if (g5.has_value() != g6.has_value())
            throw InvariantError("gain definedness split at phase-two selection");
          if (!g5) {
            // Undefined gain: the holder dominates everyone, so the other
            // three split the residue instead of reshuffling a round. The
            // agents excused from evaluations in the second round must first
            // catch up on the trim they skipped, or they cannot divide.
            br.selfridge_conway = true;
            std::array<int, 3> trio{};
            for (int x = 0, t = 0; x < kAgents; ++x)
              if (x != f) trio[t++] = x;
            st.oracle.set_step("phase2.knowledge_catchup");
            for (int x : trio)
              if (!st.oracle.can_value(x, st.residue)) st.oracle.eval_piece(x, st.residue);
            st.oracle.set_step("phase2.selfridge_conway");
            aud.dominator_escape(st, f);
            Snapshot before = st.snapshot();
            SelfridgeConwayResult r = run_selfridge_conway(st, trio, "phase2.selfridge_conway");
            aud.selfridge(st, before, r);
            aud.state_checks(st);
            finish("phase2.selfridge_conway");
          } else {
            st.oracle.set_step("phase2.correction");
            int picked = *g5 <= *g6 ? rounds[0] : rounds[1];
            br.phase2_correction = true;
            aud.phase2_selection(st, rounds[0], rounds[1], f, picked, g5, g6);
            Snapshot before = st.snapshot();
            CorrectionResult cr = run_correction(st, picked, "phase2.correction");
            aud.correction(st, before, cr);
            aud.state_checks(st);
          }
        }
        if (!done) {
          aud.phase2_post(st);

          br.cut_and_choose = true;
          Snapshot before = st.snapshot();
          CutChooseResult cc = run_cut_and_choose(st, b, c, "phase3.cut_and_choose");
          aud.cut_choose(st, before, cc);
          aud.state_checks(st);
          finish("phase3.cut_and_choose");
        }
      }
    }
  } catch (const InvariantError& e) {
    aborted = true;
    br.finished_at = "aborted";
    aud.failure(st, "internal.invariant", Json{{"error", e.what()}});
  }

  aud.final_checks(st, aborted);

  RunResult out;
  out.allocation = st.allocation;
  out.residue = st.residue;
  out.complete = !aborted && st.residue.empty();
  out.ledger = st.oracle.ledger();
  out.trace = std::move(st.trace);
  out.cores = std::move(st.cores);
  out.corrections = std::move(st.corrections);
  out.branches = br;
  out.audit = aud.take();
  return out;
}

}  // namespace fairdiv
