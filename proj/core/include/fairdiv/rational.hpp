#pragma once

#include <gmpxx.h>

#include <string>

#include "fairdiv/error.hpp"

namespace fairdiv {

// All protocol arithmetic is exact; no floating point anywhere in the engine.
using Rational = mpq_class;

// A coordinate on the cake, always within [0, 1].
using Point = Rational;

inline Rational rat(long num, long den = 1) {
  if (den == 0) throw ContractError("rational with zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// Parses "p/q" or "p". Whitespace is not accepted.
Rational rat_parse(const std::string& text);

// Canonical decimal-free form: "p/q", or just "p" when q == 1.
std::string rat_str(const Rational& q);

}  // namespace fairdiv
