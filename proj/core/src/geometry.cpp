#include "fairdiv/geometry.hpp"

#include <algorithm>

#include "fairdiv/error.hpp"

namespace fairdiv {

Piece::Piece(std::vector<Interval> parts) {
  for (const auto& iv : parts) {
    if (iv.lo < 0 || iv.hi > 1 || iv.lo > iv.hi)
      throw ContractError("interval outside [0,1] or inverted: [" +
                          rat_str(iv.lo) + "," + rat_str(iv.hi) + "]");
  }
  std::erase_if(parts, [](const Interval& iv) { return iv.lo == iv.hi; });
  std::sort(parts.begin(), parts.end(), [](const Interval& a, const Interval& b) {
    return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
  });
  for (const auto& iv : parts) {
    if (!parts_.empty() && iv.lo <= parts_.back().hi) {
      if (iv.hi > parts_.back().hi) parts_.back().hi = iv.hi;
    } else {
      parts_.push_back(iv);
    }
  }
}

Piece Piece::interval(Point lo, Point hi) {
  return Piece({Interval{std::move(lo), std::move(hi)}});
}

Piece Piece::whole_cake() { return interval(0, 1); }

Rational Piece::length() const {
  Rational total = 0;
  for (const auto& iv : parts_) total += iv.hi - iv.lo;
  return total;
}

bool Piece::contains(const Piece& other) const {
  return subtract(other, *this).empty();
}

Piece unite(const Piece& a, const Piece& b) {
  std::vector<Interval> all = a.parts();
  all.insert(all.end(), b.parts().begin(), b.parts().end());
  return Piece(std::move(all));
}

Piece subtract(const Piece& a, const Piece& b) {
  std::vector<Interval> out;
  for (const auto& iv : a.parts()) {
    Point cursor = iv.lo;
    for (const auto& cut : b.parts()) {
      if (cut.hi <= cursor) continue;
      if (cut.lo >= iv.hi) break;
      if (cut.lo > cursor) out.push_back({cursor, cut.lo});
      cursor = std::max(cursor, cut.hi);
      if (cursor >= iv.hi) break;
    }
    if (cursor < iv.hi) out.push_back({cursor, iv.hi});
  }
  return Piece(std::move(out));
}

Piece intersect(const Piece& a, const Piece& b) {
  std::vector<Interval> out;
  for (const auto& x : a.parts()) {
    for (const auto& y : b.parts()) {
      Point lo = std::max(x.lo, y.lo);
      Point hi = std::min(x.hi, y.hi);
      if (lo < hi) out.push_back({lo, hi});
    }
  }
  return Piece(std::move(out));
}

ResidueFrame::ResidueFrame(Piece residue) : residue_(std::move(residue)) {
  if (residue_.empty()) throw ContractError("frame over an empty residue");
  Rational acc = 0;
  for (const auto& iv : residue_.parts()) {
    prefix_.push_back(acc);
    acc += iv.hi - iv.lo;
  }
  length_ = acc;
}

Point ResidueFrame::to_cake(const Rational& t) const {
  if (t < 0 || t > length_) throw ContractError("frame coordinate out of range: " + rat_str(t));
  const auto& parts = residue_.parts();
  for (size_t i = 0; i < parts.size(); ++i) {
    Rational offset = t - prefix_[i];
    if (offset <= parts[i].hi - parts[i].lo) return parts[i].lo + offset;
  }
  return parts.back().hi;  // t == length_, unreachable otherwise
}

Rational ResidueFrame::to_frame(const Point& x) const {
  const auto& parts = residue_.parts();
  for (size_t i = 0; i < parts.size(); ++i) {
    if (x >= parts[i].lo && x <= parts[i].hi) return prefix_[i] + (x - parts[i].lo);
  }
  throw ContractError("point not inside the residue: " + rat_str(x));
}

Piece ResidueFrame::slice(const Rational& a, const Rational& b) const {
  if (a > b) throw ContractError("inverted frame span");
  if (a < 0 || b > length_) throw ContractError("frame span out of range");
  std::vector<Interval> out;
  const auto& parts = residue_.parts();
  for (size_t i = 0; i < parts.size(); ++i) {
    Rational len = parts[i].hi - parts[i].lo;
    Rational lo = std::max(Rational(a - prefix_[i]), Rational(0));
    Rational hi = std::min(Rational(b - prefix_[i]), len);
    if (lo < hi) out.push_back({parts[i].lo + lo, parts[i].lo + hi});
  }
  return Piece(std::move(out));
}

Json piece_to_json(const Piece& p) {
  Json j = Json::array();
  for (const auto& iv : p.parts()) j.push_back({rat_str(iv.lo), rat_str(iv.hi)});
  return j;
}

Piece piece_from_json(const Json& j) {
  if (!j.is_array()) throw ContractError("piece json must be an array");
  std::vector<Interval> parts;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2)
      throw ContractError("piece interval must be a [lo, hi] pair");
    parts.push_back({rat_parse(e[0].get<std::string>()), rat_parse(e[1].get<std::string>())});
  }
  return Piece(std::move(parts));
}

}  // namespace fairdiv
