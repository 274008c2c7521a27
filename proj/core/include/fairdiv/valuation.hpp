#pragma once

#include <vector>

#include "fairdiv/geometry.hpp"
#include "fairdiv/rational.hpp"

namespace fairdiv {

// A piecewise-constant density over [0, 1] with total mass exactly 1.
// Breakpoints are strictly increasing from 0 to 1; densities[i] holds on
// [breakpoints[i], breakpoints[i+1]] and may be zero.
class Valuation {
 public:
  Valuation(std::vector<Point> breakpoints, std::vector<Rational> densities);

  const std::vector<Point>& breakpoints() const { return breakpoints_; }
  const std::vector<Rational>& densities() const { return densities_; }

  Rational eval(const Point& lo, const Point& hi) const;
  Rational eval(const Interval& iv) const { return eval(iv.lo, iv.hi); }
  Rational eval(const Piece& p) const;

  // Smallest y with eval(x, y) == r. Throws ContractError when r exceeds the
  // mass remaining to the right of x.
  Point cut(const Point& x, const Rational& r) const;

 private:
  std::vector<Point> breakpoints_;
  std::vector<Rational> densities_;
};

// Largest cake point m within `span` such that the value of the part of
// `span` from m rightward equals r. This is the mark-placement primitive:
// maximal position means the trim left of the mark is as large as possible.
Point right_cut_cake(const Valuation& v, const Piece& span, const Rational& r);

// Same, expressed over a residue frame: the span is [span_lo, span_hi] in
// frame coordinates and the returned mark is a frame coordinate too.
Rational right_cut(const Valuation& v, const ResidueFrame& frame,
                   const Rational& span_lo, const Rational& span_hi,
                   const Rational& r);

}  // namespace fairdiv
