#include <doctest.h>

#include "fairdiv/error.hpp"
#include "fairdiv/geometry.hpp"

using namespace fairdiv;

namespace {
Piece iv(long a, long b, long d) { return Piece::interval(rat(a, d), rat(b, d)); }
}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("construction canonicalizes") {
  CHECK(Piece({{rat(1, 5), rat(1, 2)}, {rat(1, 2), rat(3, 5)}}) == iv(1, 3, 5));
  CHECK(Piece({{rat(3, 10), rat(3, 10)}}).empty());

  Piece sorted({{rat(7, 10), rat(4, 5)}, {rat(1, 10), rat(1, 5)}});
  REQUIRE(sorted.parts().size() == 2);
  CHECK(sorted.parts()[0] == Interval{rat(1, 10), rat(1, 5)});
  CHECK(sorted.parts()[1] == Interval{rat(7, 10), rat(4, 5)});

  CHECK_THROWS_AS(Piece({{rat(1, 2), rat(1, 4)}}), ContractError);
  CHECK_THROWS_AS(Piece({{rat(-1, 4), rat(1, 4)}}), ContractError);
  CHECK_THROWS_AS(Piece({{rat(1, 2), rat(3, 2)}}), ContractError);
}

TEST_CASE("set operations") {
  CHECK(subtract(Piece::whole_cake(), iv(1, 2, 4)) == unite(iv(0, 1, 4), iv(2, 4, 4)));
  CHECK(subtract(iv(0, 1, 2), iv(0, 1, 2)).empty());
  CHECK(subtract(unite(iv(1, 4, 10), iv(6, 9, 10)), iv(3, 7, 10)) ==
        unite(iv(1, 3, 10), iv(7, 9, 10)));

  CHECK(unite(iv(0, 1, 4), iv(2, 3, 4)).parts().size() == 2);
  CHECK(unite(iv(0, 2, 4), iv(1, 3, 4)) == iv(0, 3, 4));
  CHECK(unite(Piece(), iv(1, 3, 10)) == iv(1, 3, 10));

  CHECK(intersect(iv(0, 2, 4), iv(1, 3, 4)) == iv(1, 2, 4));
  CHECK(intersect(iv(0, 1, 4), iv(2, 3, 4)).empty());
}

TEST_CASE("algebraic identities hold on a small grid") {
  // every piece with parts on the 1/4 grid, as 8-bit masks of eighths
  std::vector<Piece> pieces;
  for (int mask = 0; mask < 256; mask += 7) {
    std::vector<Interval> parts;
    for (int b = 0; b < 8; ++b)
      if (mask & (1 << b)) parts.push_back({rat(b, 8), rat(b + 1, 8)});
    pieces.emplace_back(std::move(parts));
  }
  for (const Piece& a : pieces)
    for (const Piece& b : pieces) {
      CHECK(unite(a, b).length() + intersect(a, b).length() == a.length() + b.length());
      CHECK(unite(subtract(a, b), intersect(a, b)) == a);
      CHECK(unite(a, b) == unite(b, a));
      CHECK(a.contains(intersect(a, b)));
    }
}

TEST_CASE("residue frame maps across gaps") {
  ResidueFrame f(unite(iv(2, 5, 10), iv(7, 8, 10)));
  CHECK(f.length() == rat(2, 5));
  CHECK(f.to_cake(rat(3, 10)) == rat(1, 2));
  CHECK(f.to_cake(rat(7, 20)) == rat(3, 4));
  CHECK(f.to_cake(0) == rat(1, 5));
  CHECK(f.to_frame(rat(3, 4)) == rat(7, 20));
  CHECK_THROWS_AS(f.to_cake(rat(1, 2)), ContractError);
  CHECK_THROWS_AS(f.to_frame(rat(13, 20)), ContractError);

  ResidueFrame id(Piece::whole_cake());
  CHECK(id.to_cake(rat(21, 50)) == rat(21, 50));

  // round-trip on every grid point inside the residue
  for (int k = 0; k <= 40; ++k) {
    Rational t = rat(k, 100);
    CHECK(f.to_frame(f.to_cake(t)) == t);
  }
}

TEST_CASE("slice crosses the gap") {
  ResidueFrame f(unite(iv(2, 5, 10), iv(7, 8, 10)));
  CHECK(f.slice(rat(1, 10), rat(7, 20)) == unite(iv(3, 5, 10), iv(14, 15, 20)));
  CHECK(f.slice(0, f.length()) == f.residue());
  CHECK(f.slice(rat(1, 10), rat(1, 10)).empty());
  CHECK_THROWS_AS(f.slice(rat(1, 5), rat(1, 10)), ContractError);
}

TEST_CASE("json round-trip") {
  Piece p = unite(iv(1, 4, 10), iv(6, 9, 10));
  Json j = piece_to_json(p);
  CHECK(j.dump() == R"([["1/10","2/5"],["3/5","9/10"]])");
  CHECK(piece_from_json(j) == p);
  CHECK(piece_from_json(Json::array()).empty());
}

}  // TEST_SUITE
