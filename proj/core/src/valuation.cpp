#include "fairdiv/valuation.hpp"

#include <algorithm>

#include "fairdiv/error.hpp"

namespace fairdiv {

Valuation::Valuation(std::vector<Point> breakpoints, std::vector<Rational> densities)
    : breakpoints_(std::move(breakpoints)), densities_(std::move(densities)) {
  if (breakpoints_.size() < 2 || densities_.size() + 1 != breakpoints_.size())
    throw ContractError("valuation needs n+1 breakpoints for n densities");
  if (breakpoints_.front() != 0 || breakpoints_.back() != 1)
    throw ContractError("breakpoints must start at 0 and end at 1");
  for (size_t i = 0; i + 1 < breakpoints_.size(); ++i)
    if (breakpoints_[i] >= breakpoints_[i + 1])
      throw ContractError("breakpoints must be strictly increasing");
  Rational mass = 0;
  for (size_t i = 0; i < densities_.size(); ++i) {
    if (densities_[i] < 0) throw ContractError("negative density");
    mass += densities_[i] * (breakpoints_[i + 1] - breakpoints_[i]);
  }
  if (mass != 1) throw ContractError("total mass is " + rat_str(mass) + ", must be exactly 1");
}

Rational Valuation::eval(const Point& lo, const Point& hi) const {
  if (lo > hi || lo < 0 || hi > 1) throw ContractError("bad eval interval");
  Rational total = 0;
  for (size_t i = 0; i < densities_.size(); ++i) {
    Point a = std::max(lo, breakpoints_[i]);
    Point b = std::min(hi, breakpoints_[i + 1]);
    if (a < b) total += densities_[i] * (b - a);
  }
  return total;
}

Rational Valuation::eval(const Piece& p) const {
  Rational total = 0;
  for (const auto& iv : p.parts()) total += eval(iv);
  return total;
}

Point Valuation::cut(const Point& x, const Rational& r) const {
  if (x < 0 || x > 1) throw ContractError("cut origin outside the cake");
  if (r < 0) throw ContractError("cut target must be nonnegative");
  if (r == 0) return x;
  Rational acc = 0;
  for (size_t i = 0; i < densities_.size(); ++i) {
    Point a = std::max(x, breakpoints_[i]);
    Point b = breakpoints_[i + 1];
    if (a >= b) continue;
    Rational mass = densities_[i] * (b - a);
    if (acc + mass >= r) {
      Rational need = r - acc;
      if (need == 0) return a;
      return a + need / densities_[i];  // mass >= need > 0 implies density > 0
    }
    acc += mass;
  }
  throw ContractError("cut target exceeds value right of origin");
}

Point right_cut_cake(const Valuation& v, const Piece& span, const Rational& r) {
  if (r < 0) throw ContractError("right cut target must be nonnegative");
  if (r == 0) {
    if (span.empty()) throw ContractError("right cut with r=0 on an empty span");
    return span.parts().back().hi;
  }
  const auto& bps = v.breakpoints();
  const auto& ds = v.densities();
  Rational acc = 0;
  const auto& parts = span.parts();
  for (auto ivIt = parts.rbegin(); ivIt != parts.rend(); ++ivIt) {
    for (size_t k = ds.size(); k-- > 0;) {
      Point a = std::max(ivIt->lo, bps[k]);
      Point b = std::min(ivIt->hi, bps[k + 1]);
      if (a >= b) continue;
      Rational mass = ds[k] * (b - a);
      if (acc + mass >= r) {
        Rational need = r - acc;  // need > 0: acc < r whenever we get here
        return b - need / ds[k];
      }
      acc += mass;
    }
  }
  throw ContractError("right cut target exceeds span value");
}

Rational right_cut(const Valuation& v, const ResidueFrame& frame,
                   const Rational& span_lo, const Rational& span_hi,
                   const Rational& r) {
  Piece span = frame.slice(span_lo, span_hi);
  if (r == 0) return span_hi;
  return frame.to_frame(right_cut_cake(v, span, r));
}

}  // namespace fairdiv
