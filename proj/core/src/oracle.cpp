#include "fairdiv/oracle.hpp"

#include "fairdiv/error.hpp"

namespace fairdiv {

void QueryLedger::set_step(const std::string& label) {
  if (label.empty()) throw ContractError("empty step label");
  if (!steps_.empty() && steps_.back().label == label) return;
  steps_.push_back({label, 0, 0});
}

const std::string& QueryLedger::step() const {
  if (steps_.empty()) throw InvariantError("query billed before any step was set");
  return steps_.back().label;
}

void QueryLedger::bill_cut() {
  if (steps_.empty()) throw InvariantError("query billed before any step was set");
  ++steps_.back().cuts;
  ++cuts_;
}

void QueryLedger::bill_eval() {
  if (steps_.empty()) throw InvariantError("query billed before any step was set");
  ++steps_.back().evals;
  ++evals_;
}

Json QueryLedger::to_json() const {
  Json steps = Json::array();
  for (const auto& s : steps_)
    steps.push_back({{"label", s.label}, {"cuts", s.cuts}, {"evals", s.evals}});
  return {{"cuts", cuts_}, {"evals", evals_}, {"steps", steps}};
}

KnowledgeCache::KnowledgeCache() {
  for (int a = 0; a < kAgents; ++a) {
    cdf_[a][Point(0)] = 0;
    cdf_[a][Point(1)] = 1;
  }
}

bool KnowledgeCache::knows(int agent, const Point& x) const {
  return cdf_[agent].count(x) > 0;
}

void KnowledgeCache::insert_point(int agent, const Point& x, const Rational& cdf) {
  auto [it, fresh] = cdf_[agent].emplace(x, cdf);
  if (!fresh && it->second != cdf)
    throw InvariantError("contradictory knowledge for agent " + std::to_string(agent) +
                         " at " + rat_str(x) + ": " + rat_str(it->second) + " vs " + rat_str(cdf));
}

void KnowledgeCache::learn(int agent, const Point& x, const Rational& cdf) {
  insert_point(agent, x, cdf);
  // A new point can complete pending spans, whose far endpoints can complete
  // further spans; drain until stable.
  for (bool changed = true; changed;) {
    changed = false;
    for (auto it = stash_[agent].begin(); it != stash_[agent].end(); ++it) {
      const auto& [lo, hi] = it->first;
      bool klo = knows(agent, lo), khi = knows(agent, hi);
      if (!klo && !khi) continue;
      if (klo && khi) {
        if (cdf_[agent][hi] - cdf_[agent][lo] != it->second)
          throw InvariantError("pending span contradicts cached knowledge");
      } else if (klo) {
        insert_point(agent, hi, cdf_[agent][lo] + it->second);
      } else {
        insert_point(agent, lo, cdf_[agent][hi] - it->second);
      }
      stash_[agent].erase(it);
      changed = true;
      break;
    }
  }
}

Rational KnowledgeCache::cdf(int agent, const Point& x) const {
  auto it = cdf_[agent].find(x);
  if (it == cdf_[agent].end())
    throw InvariantError("agent " + std::to_string(agent) + " has no knowledge at " + rat_str(x));
  return it->second;
}

bool KnowledgeCache::can_value(int agent, const Piece& p) const {
  for (const auto& iv : p.parts())
    if (!knows(agent, iv.lo) || !knows(agent, iv.hi)) return false;
  return true;
}

Rational KnowledgeCache::value(int agent, const Piece& p) const {
  Rational total = 0;
  for (const auto& iv : p.parts()) total += cdf(agent, iv.hi) - cdf(agent, iv.lo);
  return total;
}

void KnowledgeCache::stash(int agent, const Point& lo, const Point& hi, const Rational& v) {
  stash_[agent][{lo, hi}] = v;
}

const Rational* KnowledgeCache::stashed(int agent, const Point& lo, const Point& hi) const {
  auto it = stash_[agent].find({lo, hi});
  return it == stash_[agent].end() ? nullptr : &it->second;
}

RwOracle::RwOracle(const std::array<Valuation, kAgents>* vals) : vals_(vals) {
  if (!vals_) throw ContractError("oracle needs valuations");
}

const Valuation& RwOracle::val(int agent) const {
  if (agent < 0 || agent >= kAgents) throw ContractError("bad agent index");
  return (*vals_)[agent];
}

Point RwOracle::cut(int agent, const Point& x, const Rational& r) {
  Point y = val(agent).cut(x, r);
  ledger_.bill_cut();
  if (cache_.knows(agent, x)) {
    cache_.learn(agent, y, cache_.cdf(agent, x) + r);
  } else {
    cache_.stash(agent, x, y, r);
  }
  return y;
}

Rational RwOracle::eval(int agent, const Point& lo, const Point& hi) {
  const Valuation& vu = val(agent);
  if (lo > hi) throw ContractError("inverted eval interval");
  if (lo == hi) return 0;
  bool klo = cache_.knows(agent, lo), khi = cache_.knows(agent, hi);
  if (klo && khi) return cache_.cdf(agent, hi) - cache_.cdf(agent, lo);
  if (const Rational* s = cache_.stashed(agent, lo, hi)) return *s;
  Rational v = vu.eval(lo, hi);
  ledger_.bill_eval();
  if (klo) {
    cache_.learn(agent, hi, cache_.cdf(agent, lo) + v);
  } else if (khi) {
    cache_.learn(agent, lo, cache_.cdf(agent, hi) - v);
  } else {
    cache_.stash(agent, lo, hi, v);
  }
  return v;
}

Rational RwOracle::eval_piece(int agent, const Piece& p, Billing mode) {
  const Valuation& vu = val(agent);
  if (mode == Billing::by_cache) {
    Rational total = 0;
    for (const auto& iv : p.parts()) total += eval(agent, iv.lo, iv.hi);
    return total;
  }
  // always_one: a single billed query answers the whole piece. The accounting
  // only stays honest when at most one subinterval is actually unknown.
  int unknown = 0;
  for (const auto& iv : p.parts())
    if (!cache_.knows(agent, iv.lo) || !cache_.knows(agent, iv.hi)) ++unknown;
  if (unknown > 1)
    throw InvariantError("atomic piece eval would reveal more than one interval");
  Rational total = vu.eval(p);
  ledger_.bill_eval();
  learn_span_value(agent, p, total);
  return total;
}

Rational RwOracle::frame_cut(int agent, const ResidueFrame& frame, const Rational& prefix_value) {
  if (prefix_value < 0) throw ContractError("negative cut target");
  Rational acc = 0;
  for (const auto& iv : frame.residue().parts()) {
    Rational v = cache_.cdf(agent, iv.hi) - cache_.cdf(agent, iv.lo);
    if (acc + v >= prefix_value) {
      Point y = cut(agent, iv.lo, prefix_value - acc);
      return frame.to_frame(y);
    }
    acc += v;
  }
  throw ContractError("cut target exceeds residue value");
}

Rational RwOracle::mark_cut(int agent, const ResidueFrame& frame, const Rational& span_lo,
                            const Rational& span_hi, const Rational& r) {
  Rational m = right_cut(val(agent), frame, span_lo, span_hi, r);
  ledger_.bill_cut();
  learn_span_value(agent, frame.slice(m, span_hi), r);
  return m;
}

void RwOracle::learn_span_value(int agent, const Piece& span, const Rational& v) {
  Rational rest = v;
  const Interval* open = nullptr;
  for (const auto& iv : span.parts()) {
    bool klo = cache_.knows(agent, iv.lo), khi = cache_.knows(agent, iv.hi);
    if (klo && khi) {
      rest -= cache_.cdf(agent, iv.hi) - cache_.cdf(agent, iv.lo);
    } else if (open) {
      throw InvariantError("span value with more than one unknown interval");
    } else {
      open = &iv;
    }
  }
  if (!open) {
    if (rest != 0) throw InvariantError("span value contradicts cached knowledge");
    return;
  }
  if (cache_.knows(agent, open->lo)) {
    cache_.learn(agent, open->hi, cache_.cdf(agent, open->lo) + rest);
  } else if (cache_.knows(agent, open->hi)) {
    cache_.learn(agent, open->lo, cache_.cdf(agent, open->hi) - rest);
  } else {
    cache_.stash(agent, open->lo, open->hi, rest);
  }
}

}  // namespace fairdiv
