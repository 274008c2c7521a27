#pragma once

#include <array>

#include "fairdiv/instance.hpp"

namespace testutil {

using fairdiv::Instance;
using fairdiv::rat;
using fairdiv::Rational;
using fairdiv::Valuation;

inline Valuation uniform_val() { return Valuation({rat(0), rat(1)}, {rat(1)}); }

inline Valuation left_heavy() { return Valuation({rat(0), rat(1, 2), rat(1)}, {rat(2), rat(0)}); }

inline Valuation right_heavy() { return Valuation({rat(0), rat(1, 2), rat(1)}, {rat(0), rat(2)}); }

// Masses over the four quarter blocks; must sum to 1.
inline Valuation blocks(const Rational& m0, const Rational& m1, const Rational& m2,
                        const Rational& m3) {
  return Valuation({rat(0), rat(1, 4), rat(1, 2), rat(3, 4), rat(1)},
                   {m0 * 4, m1 * 4, m2 * 4, m3 * 4});
}

inline Instance uniform_instance() {
  return {uniform_val(), uniform_val(), uniform_val(), uniform_val()};
}

// Non-cutters want different regions: the first Core call settles everyone.
inline Instance disjoint_instance() {
  return {uniform_val(), left_heavy(), right_heavy(),
          Valuation({rat(0), rat(1, 4), rat(1, 2), rat(1)}, {rat(0), rat(4), rat(0)})};
}

// All non-cutters chase piece 0 with no competition for their second
// favorites: three 2-marks on piece 0, one partial piece.
inline Instance contested_instance() {
  return {uniform_val(), blocks(rat(1, 2), rat(1, 4), rat(1, 8), rat(1, 8)),
          blocks(rat(1, 2), rat(1, 8), rat(1, 4), rat(1, 8)),
          blocks(rat(1, 2), rat(1, 8), rat(1, 8), rat(1, 4))};
}

// Identical spiky non-cutters: three 3-marks over pieces 0 and 1, two
// partial pieces, a chooser holding the rightmost mark on both.
inline Instance twin_peak_instance() {
  Valuation v = blocks(rat(1, 2), rat(1, 4), rat(1, 8), rat(1, 8));
  return {uniform_val(), v, v, v};
}

}  // namespace testutil
