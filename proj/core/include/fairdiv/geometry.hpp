#pragma once

#include <vector>

#include "fairdiv/json.hpp"
#include "fairdiv/rational.hpp"

namespace fairdiv {

struct Interval {
  Point lo;
  Point hi;
  bool operator==(const Interval&) const = default;
};

// A finite union of disjoint subintervals of [0, 1], kept canonical: sorted,
// nonoverlapping, adjacent runs merged, zero-length runs dropped.
class Piece {
 public:
  Piece() = default;
  explicit Piece(std::vector<Interval> parts);

  static Piece interval(Point lo, Point hi);
  static Piece whole_cake();

  const std::vector<Interval>& parts() const { return parts_; }
  bool empty() const { return parts_.empty(); }
  Rational length() const;
  bool contains(const Piece& other) const;

  bool operator==(const Piece&) const = default;

 private:
  std::vector<Interval> parts_;
};

Piece unite(const Piece& a, const Piece& b);
Piece subtract(const Piece& a, const Piece& b);
Piece intersect(const Piece& a, const Piece& b);

// Linear coordinates over a (possibly disconnected) residue: frame coordinate
// t in [0, total length] sweeps the residue left to right with the gaps
// collapsed. Cut points and marks live in frame coordinates so that
// left/right comparisons stay meaningful across gaps.
class ResidueFrame {
 public:
  explicit ResidueFrame(Piece residue);

  const Piece& residue() const { return residue_; }
  const Rational& length() const { return length_; }

  Point to_cake(const Rational& t) const;
  Rational to_frame(const Point& x) const;
  Piece slice(const Rational& a, const Rational& b) const;

 private:
  Piece residue_;
  std::vector<Rational> prefix_;  // prefix_[i] = total length before part i
  Rational length_;
};

Json piece_to_json(const Piece& p);
Piece piece_from_json(const Json& j);

}  // namespace fairdiv
