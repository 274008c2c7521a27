#pragma once

#include <array>
#include <optional>
#include <string>

#include "fairdiv/audit.hpp"
#include "fairdiv/geometry.hpp"
#include "fairdiv/protocol.hpp"
#include "fairdiv/valuation.hpp"

namespace fairdiv {

// entry (i, j) = v_i(X_j), recomputed from the valuations directly.
using EnvyMatrix = std::array<std::array<Rational, kAgents>, kAgents>;

// edge (i, j) iff i would not envy j even if j also took the whole residue.
using DominationGraph = std::array<std::array<bool, kAgents>, kAgents>;

EnvyMatrix envy_matrix(const std::array<Piece, kAgents>& allocation,
                       const std::array<Valuation, kAgents>& vals);

bool envy_free(const std::array<Piece, kAgents>& allocation,
               const std::array<Valuation, kAgents>& vals);

DominationGraph domination_graph(const std::array<Piece, kAgents>& allocation,
                                 const Piece& residue,
                                 const std::array<Valuation, kAgents>& vals);

// Gain of `agent` for the suballocation `sub` of `full`: her own sub piece
// minus her best sub piece held by anyone she does not dominate in `full`.
// Empty when she dominates everyone else.
std::optional<Rational> gain(const std::array<Piece, kAgents>& sub,
                             const std::array<Piece, kAgents>& full, const Piece& residue,
                             int agent, const std::array<Valuation, kAgents>& vals);

// The round's insignificant piece recomputed from the valuations alone.
std::optional<Insignificant> exact_insignificant(const CoreResult& r,
                                                 const std::array<Valuation, kAgents>& vals);

// Piece assignment of one round as it stands now: the round's own outcome,
// overridden by any correction later applied to that round.
std::array<int, kAgents> current_piece_of(const ProtocolState& st, int core_index);

// All single-round invariants of a division round, checked in isolation
// against exact values. `before`/`after` bracket the call.
AuditReport audit_core(const CoreResult& r, const Snapshot& before, const Snapshot& after,
                       const std::array<Valuation, kAgents>& vals);

// Collects pass/fail rows for every promised property over a full run. Hooks
// mirror the protocol's decision points; each one recomputes the property
// from the valuations, never from the engine's cached knowledge. Failing
// rows carry the exact offending values plus the trace up to that point.
class Auditor {
 public:
  Auditor(const std::array<Valuation, kAgents>* vals, bool enabled)
      : vals_(vals), enabled_(enabled) {}

  bool enabled() const { return enabled_; }

  // After every protocol step: partition sanity, envy-freeness of the whole
  // allocation, and agreement of cache-derived dominations with exact ones.
  void state_checks(const ProtocolState& st);

  // One division round, including the cross-round domination lemmas.
  void core(const ProtocolState& st, const Snapshot& before, const CoreResult& r);

  // One reshuffle: permutation sanity plus the three correction properties
  // and the second-favorite lemma.
  void correction(const ProtocolState& st, const Snapshot& before, const CorrectionResult& c);

  // The four-round target choice: chosen round's gains covered by the rest.
  void pigeonhole(const ProtocolState& st, const std::array<int, 4>& rounds,
                  const CorrectionChoice& choice);

  // A correction was skipped because this agent dominates all others; the
  // residue goes to the rest, so the claim has to hold for real.
  void dominator_escape(const ProtocolState& st, int agent);

  // Agent 0 dominates at least two agents after her fifth round as cutter.
  void double_domination(const ProtocolState& st);

  // After the round that excluded agent 0: its cutter dominates someone
  // agent 0 already dominated.
  void exclusion_round(const ProtocolState& st, const std::vector<int>& dominated_before,
                       int cutter);

  // Role selection entering phase two; remembered for the later hooks.
  void phase2_roles(const ProtocolState& st, int a, int b, int c, int d);

  // The not-covered branch: both rounds stuck on the same agent, and the
  // round with the smaller gain was picked.
  void phase2_selection(const ProtocolState& st, int call5, int call6, int target, int picked,
                        const std::optional<Rational>& gain5,
                        const std::optional<Rational>& gain6);

  // Phase-two postcondition: A and D dominate both B and C.
  void phase2_post(const ProtocolState& st);

  void selfridge(const ProtocolState& st, const Snapshot& before,
                 const SelfridgeConwayResult& r);

  void cut_choose(const ProtocolState& st, const Snapshot& before, const CutChooseResult& r);

  // Whole-run verdicts; skipped when the run aborted.
  void final_checks(const ProtocolState& st, bool aborted);

  // Records an externally detected failure (e.g. an engine invariant trip).
  void failure(const ProtocolState& st, const std::string& name, Json witness);

  AuditReport take() { return std::move(report_); }

 private:
  void check(const ProtocolState& st, const std::string& name, bool pass, Json witness);
  void merge(const ProtocolState& st, AuditReport rows);

  const std::array<Valuation, kAgents>* vals_;
  bool enabled_;
  AuditReport report_;
  int role_a_ = -1, role_b_ = -1, role_c_ = -1, role_d_ = -1;
};

}  // namespace fairdiv
