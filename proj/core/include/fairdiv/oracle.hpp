#pragma once

#include <array>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fairdiv/geometry.hpp"
#include "fairdiv/json.hpp"
#include "fairdiv/valuation.hpp"

namespace fairdiv {

inline constexpr int kAgents = 4;

struct StepCounts {
  std::string label;
  long cuts = 0;
  long evals = 0;
};

// Counts every billed query and attributes it to the protocol step that was
// active when it was issued. A step with zero queries still gets a row.
class QueryLedger {
 public:
  void set_step(const std::string& label);
  const std::string& step() const;
  void bill_cut();
  void bill_eval();

  long cuts() const { return cuts_; }
  long evals() const { return evals_; }
  const std::vector<StepCounts>& steps() const { return steps_; }

  Json to_json() const;

 private:
  std::vector<StepCounts> steps_;
  long cuts_ = 0;
  long evals_ = 0;
};

// What each agent has learned so far, as known points of her cumulative value
// function F(x) = v([0, x]). Seeded with F(0)=0 and F(1)=1: every agent knows
// the whole cake's worth. A value query is free exactly when it is derivable
// from these points; otherwise it is billed and its answer is recorded.
class KnowledgeCache {
 public:
  KnowledgeCache();

  bool knows(int agent, const Point& x) const;
  void learn(int agent, const Point& x, const Rational& cdf);
  Rational cdf(int agent, const Point& x) const;

  bool can_value(int agent, const Piece& p) const;
  // Throws InvariantError when the piece's value is not derivable: protocol
  // code must never need a value the agent has not legitimately learned.
  Rational value(int agent, const Piece& p) const;

  // Fallback for value knowledge not anchored to a known endpoint.
  void stash(int agent, const Point& lo, const Point& hi, const Rational& v);
  const Rational* stashed(int agent, const Point& lo, const Point& hi) const;

 private:
  void insert_point(int agent, const Point& x, const Rational& cdf);

  std::array<std::map<Point, Rational>, kAgents> cdf_;
  std::array<std::map<std::pair<Point, Point>, Rational>, kAgents> stash_;
};

enum class Billing { by_cache, always_one };

// The metered query interface. Protocol logic reaches valuations only through
// these calls; audits read valuations directly and never touch the ledger.
class RwOracle {
 public:
  explicit RwOracle(const std::array<Valuation, kAgents>* vals);

  void set_step(const std::string& label) { ledger_.set_step(label); }
  QueryLedger& ledger() { return ledger_; }
  const QueryLedger& ledger() const { return ledger_; }
  const KnowledgeCache& cache() const { return cache_; }

  // Smallest y with v_agent([x, y]) == r. Always bills one cut.
  Point cut(int agent, const Point& x, const Rational& r);

  // v_agent([lo, hi]). Free when both endpoints' F values are known.
  Rational eval(int agent, const Point& lo, const Point& hi);

  // Piece value. by_cache bills one eval per underivable subinterval;
  // always_one issues exactly one billed query for the whole piece (used
  // where a protocol treats the piece query as a single atomic step).
  Rational eval_piece(int agent, const Piece& p, Billing mode = Billing::by_cache);

  // Frame coordinate t such that the residue left of t is worth
  // prefix_value to the agent (smallest such t). Bills one cut.
  Rational frame_cut(int agent, const ResidueFrame& frame, const Rational& prefix_value);

  // Mark placement: largest frame coordinate m in [span_lo, span_hi] with the
  // rest of the span worth exactly r. Bills one cut.
  Rational mark_cut(int agent, const ResidueFrame& frame, const Rational& span_lo,
                    const Rational& span_hi, const Rational& r);

  // Derivation-only read; throws when the agent could not know this value.
  Rational known_value(int agent, const Piece& p) const { return cache_.value(agent, p); }
  bool can_value(int agent, const Piece& p) const { return cache_.can_value(agent, p); }

 private:
  const Valuation& val(int agent) const;
  void learn_span_value(int agent, const Piece& span, const Rational& v);

  const std::array<Valuation, kAgents>* vals_;
  KnowledgeCache cache_;
  QueryLedger ledger_;
};

}  // namespace fairdiv
