#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "fairdiv/audit.hpp"
#include "fairdiv/geometry.hpp"
#include "fairdiv/oracle.hpp"

namespace fairdiv {

enum class MarkKind { two, three };

// A mark is a cut an agent places inside a piece; position is the frame
// coordinate of the cut, and the part right of it matches the value of her
// order-th favorite piece.
struct Mark {
  int agent = -1;
  int piece = -1;
  Rational position;
  MarkKind kind = MarkKind::two;
};

// Everything an agent saw at the moment she marked: which pieces were still
// unallocated, how she ranked them, and the value her marks aim for.
struct MarkContext {
  int agent = -1;
  int order = 2;              // 2-mark or 3-mark
  std::vector<int> pool;      // piece indexes unallocated at marking time
  std::vector<int> ranking;   // pool sorted best-first for this agent
  Rational target;            // value of her order-th favorite
};

// One of the four equal-valued (to the cutter) pieces of a division round.
struct PieceState {
  Rational span_lo;   // frame coordinates of the full piece
  Rational span_hi;
  Piece cake;         // full geometric extent
  std::vector<Mark> marks;
  int owner = -1;
  Rational alloc_lo;  // left frame edge of what the owner actually received
  Piece allocated;

  bool marked() const { return !marks.empty(); }
  bool partial() const { return alloc_lo > span_lo; }
};

// Marks ordered rightmost-first; position ties go to the lower agent id.
std::vector<Mark> ordered_marks(const PieceState& ps);

struct CoreResult {
  std::string step;
  int cutter = -1;
  std::vector<int> excluded;
  std::vector<int> eval_exempt;
  bool special = false;  // tighter per-call query bound applies

  Piece residue_before;
  Rational residue_value;            // cutter's value of the residue
  std::array<Rational, 3> cuts;      // frame coordinates, ascending
  std::array<PieceState, kAgents> pieces;
  // values[a][p]: full piece p as known to agent a when ranking happened
  std::array<std::array<Rational, kAgents>, kAgents> values;
  std::vector<MarkContext> mark_contexts;
  std::vector<int> removed;          // agents settled by the no-competition rule
  bool distinct_favorites = false;   // everyone left got a different favorite
  int chooser = -1;                  // agent holding the rightmost mark twice

  std::array<int, kAgents> piece_of;     // agent -> piece index
  std::array<Piece, kAgents> handed;     // agent -> piece received this round
  int insignificant_piece = -1;
  int insignificant_owner = -1;
  Piece residue_after;

  long delta_cuts = 0;
  long delta_evals = 0;

  bool complete() const { return residue_after.empty(); }
};

struct Insignificant {
  int owner = -1;
  int piece = -1;
  Piece allocated;
};

// The protocol's own determination, recorded when the round ran.
std::optional<Insignificant> insignificant_of(const CoreResult& r);

struct CorrectionResult {
  std::string step;
  int core_index = -1;  // which entry of ProtocolState::cores was reshuffled
  int role_a = -1, role_b = -1, role_c = -1, role_d = -1;
  bool two_partials = false;
  int mover_e = -1;                    // only when two_partials
  std::array<int, kAgents> piece_of;   // post-correction assignment
  long delta_cuts = 0;
  long delta_evals = 0;
};

struct CutChooseResult {
  std::string step;
  int cutter = -1, chooser = -1;
  Rational cut_frame;
  std::array<Piece, 2> halves;
  int chooser_take = 0;
  std::array<Piece, kAgents> handed;
  long delta_cuts = 0;
  long delta_evals = 0;
};

struct SelfridgeConwayResult {
  std::string step;
  std::array<int, 3> trio;          // divider, middle, last (ascending ids)
  std::array<Rational, 2> cuts;     // frame coordinates
  std::array<Piece, 3> thirds;      // full extents
  bool trimmed = false;
  int trim_piece = -1;
  Rational trim_mark;               // frame coordinate
  std::array<int, 3> first_take;    // piece index taken by trio[i] in round one
  std::array<Piece, 3> trim_thirds; // empty pieces when no trim happened
  std::array<int, 3> trim_take;     // subpiece index per trio member, -1 when unused
  std::array<Piece, kAgents> handed;
  long delta_cuts = 0;
  long delta_evals = 0;
};

struct TraceEvent {
  std::string step;
  Json data;
};

struct Snapshot {
  std::array<Piece, kAgents> allocation;
  Piece residue;
};

struct ProtocolState {
  explicit ProtocolState(const std::array<Valuation, kAgents>* vals)
      : valuations(vals), oracle(vals), residue(Piece::whole_cake()) {}

  const std::array<Valuation, kAgents>* valuations;
  RwOracle oracle;
  std::array<Piece, kAgents> allocation;
  Piece residue;
  std::vector<CoreResult> cores;
  std::vector<CorrectionResult> corrections;
  std::vector<TraceEvent> trace;

  Snapshot snapshot() const { return {allocation, residue}; }
};

struct CompetitionResult {
  bool competing = false;
  std::vector<int> rivals;
};

// An agent competes for a piece when (1) at least one other member of s still
// fails to dominate her, and (2) someone else in s ranks the piece first or
// second. rankings[a] lists the live pieces best-first for agent a.
CompetitionResult has_competition(int agent, int piece, const std::vector<int>& s,
                                  const std::array<std::vector<int>, kAgents>& rankings,
                                  const std::array<std::array<bool, kAgents>, kAgents>& dominates);

// dominates[i][j]: i values her own plot at least as much as j's plot plus
// the whole remaining residue. Derived from cached knowledge only.
std::array<std::array<bool, kAgents>, kAgents> known_dominations(const ProtocolState& st);

// Gain of `agent` in the round `call`: own piece minus the best piece among
// agents she does not dominate. Empty when she dominates everyone else.
std::optional<Rational> known_gain(const ProtocolState& st, const CoreResult& call, int agent);

CoreResult run_core(ProtocolState& st, int cutter, std::vector<int> excluded,
                    std::vector<int> eval_exempt, bool special, const std::string& step);

struct CorrectionChoice {
  int index = -1;  // position in the candidate list
  // gains[k][a]: protocol-side gain of agent a in candidate round k
  std::array<std::array<std::optional<Rational>, kAgents>, 4> gains;
};

// Picks which of the four rounds to reshuffle: the smallest index whose
// per-agent gain is covered by the sum of the other rounds' gains.
CorrectionChoice choose_correction_target(const ProtocolState& st,
                                          const std::array<int, 4>& core_indexes);

CorrectionResult run_correction(ProtocolState& st, int core_index, const std::string& step);

CutChooseResult run_cut_and_choose(ProtocolState& st, int cutter, int chooser,
                                   const std::string& step);

SelfridgeConwayResult run_selfridge_conway(ProtocolState& st, const std::array<int, 3>& trio,
                                           const std::string& step);

struct BranchFlags {
  bool phase1_correction = false;
  bool phase1_exclusion = false;
  bool selfridge_conway = false;
  bool phase2_reached = false;
  bool phase2_exclusion = false;
  bool phase2_correction = false;
  bool cut_and_choose = false;
  int cores = 0;
  std::string finished_at;

  std::vector<std::string> fired() const;
  Json to_json() const;
};

struct MainOptions {
  bool audit = true;
};

struct RunResult {
  std::array<Piece, kAgents> allocation;
  Piece residue;
  bool complete = false;
  QueryLedger ledger;
  std::vector<TraceEvent> trace;
  std::vector<CoreResult> cores;
  std::vector<CorrectionResult> corrections;
  BranchFlags branches;
  AuditReport audit;
};

RunResult main_protocol(const std::array<Valuation, kAgents>& vals, const MainOptions& opt = {});

}  // namespace fairdiv
