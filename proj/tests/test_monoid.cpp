#include <doctest.h>

#include "homog/monoid.hpp"

using namespace homog;

namespace {

// Oracle for the truncated difference: r (-) s must satisfy r <= s (+) m and
// be below exactly the grid elements t with r <= s (+) t.
bool minus_agrees_with_grid(const MonoidSpec& m, const std::vector<Dist>& grid, const Dist& r,
                            const Dist& s) {
  Dist val = minus(m, r, s);
  if (r > plus(m, s, val)) return false;
  for (const Dist& t : grid) {
    bool reaches = (r <= plus(m, s, t));
    bool above = (val <= t);
    if (reaches != above) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("make_monoid classifies the four kinds") {
  for (MonoidKind k : {MonoidKind::RationalsNonneg, MonoidKind::TruncatedUnitRationals,
                       MonoidKind::LexPairRationals, MonoidKind::UltrametricRationals}) {
    MonoidSpec m = make_monoid(k);
    CHECK(m.metrically_complete);
    CHECK(m.standard);
    CHECK(m.ultrametric == (k == MonoidKind::UltrametricRationals));
  }
  CHECK(make_monoid(MonoidKind::TruncatedUnitRationals).top->a == Rat(1));
  CHECK(!make_monoid(MonoidKind::RationalsNonneg).top.has_value());
  CHECK(make_monoid(MonoidKind::TruncatedUnitRationals, Rat(3)).top->a == Rat(3));
  CHECK_THROWS_AS(make_monoid(MonoidKind::TruncatedUnitRationals, Rat(0)), Error);
  CHECK_THROWS_AS(make_monoid(MonoidKind::RationalsNonneg, Rat(1)), Error);
}

TEST_CASE("plus on each kind") {
  MonoidSpec q = make_monoid(MonoidKind::RationalsNonneg);
  MonoidSpec t = make_monoid(MonoidKind::TruncatedUnitRationals);
  MonoidSpec u = make_monoid(MonoidKind::UltrametricRationals);
  MonoidSpec l = make_monoid(MonoidKind::LexPairRationals);
  CHECK(plus(q, Dist(2), Dist(3)) == Dist(5));
  CHECK(plus(t, Dist(Rat(7, 10)), Dist(Rat(6, 10))) == Dist(1));
  CHECK(plus(u, Dist(3), Dist(5)) == Dist(5));
  CHECK(plus(l, Dist(Rat(1), Rat(-2)), Dist(Rat(2), Rat(5))) == Dist(Rat(3), Rat(3)));
  CHECK_THROWS_AS(plus(q, Dist(Rat(-1)), Dist(1)), Error);
  CHECK_THROWS_AS(plus(t, Dist(2), Dist(1)), Error);
}

TEST_CASE("minus on each kind") {
  MonoidSpec q = make_monoid(MonoidKind::RationalsNonneg);
  MonoidSpec u = make_monoid(MonoidKind::UltrametricRationals);
  MonoidSpec l = make_monoid(MonoidKind::LexPairRationals);
  CHECK(minus(q, Dist(5), Dist(3)) == Dist(2));
  CHECK(minus(u, Dist(3), Dist(3)) == Dist(0));
  CHECK(minus(u, Dist(5), Dist(3)) == Dist(5));
  CHECK(minus(l, Dist(Rat(3), Rat(-1)), Dist(Rat(1), Rat(4))) == Dist(Rat(2), Rat(-5)));
  CHECK_THROWS_AS(minus(q, Dist(3), Dist(5)), Error);
}

TEST_CASE("minus matches the brute-force least element on the grid") {
  for (MonoidKind k : {MonoidKind::RationalsNonneg, MonoidKind::TruncatedUnitRationals,
                       MonoidKind::UltrametricRationals}) {
    MonoidSpec m = make_monoid(k);
    std::vector<Dist> grid = grid_values(m, 6);
    for (const Dist& r : grid)
      for (const Dist& s : grid) {
        if (s > r) continue;
        CHECK(minus_agrees_with_grid(m, grid, r, s));
      }
  }
  MonoidSpec l = make_monoid(MonoidKind::LexPairRationals);
  std::vector<Dist> grid = grid_values(l, 2);
  for (const Dist& r : grid)
    for (const Dist& s : grid) {
      if (s > r) continue;
      CHECK(minus_agrees_with_grid(l, grid, r, s));
    }
}

TEST_CASE("ominus fact clause 2 on grid samples") {
  for (MonoidKind k : {MonoidKind::RationalsNonneg, MonoidKind::TruncatedUnitRationals,
                       MonoidKind::UltrametricRationals}) {
    MonoidSpec m = make_monoid(k);
    std::vector<Dist> grid = grid_values(m, 4);
    for (const Dist& r : grid)
      for (const Dist& s : grid) {
        if (s > r) continue;
        Dist diff = minus(m, r, s);
        for (const Dist& t : grid)
          for (const Dist& u : grid) {
            Dist tu = plus(m, t, u);
            if (s <= tu) CHECK(r <= plus(m, tu, diff));
          }
      }
  }
}

TEST_CASE("plus is associative, commutative, monotone on grid triples") {
  for (MonoidKind k : {MonoidKind::RationalsNonneg, MonoidKind::TruncatedUnitRationals,
                       MonoidKind::LexPairRationals, MonoidKind::UltrametricRationals}) {
    MonoidSpec m = make_monoid(k);
    std::vector<Dist> grid = grid_values(m, k == MonoidKind::LexPairRationals ? 2 : 4);
    for (const Dist& a : grid) {
      CHECK(plus(m, a, Dist(Rat(0))) == a);
      for (const Dist& b : grid) {
        CHECK(plus(m, a, b) == plus(m, b, a));
        CHECK(a <= plus(m, a, b));  // positivity
        for (const Dist& c : grid) {
          CHECK(plus(m, plus(m, a, b), c) == plus(m, a, plus(m, b, c)));
          if (b <= c) CHECK(plus(m, a, b) <= plus(m, a, c));
        }
      }
    }
  }
}

TEST_CASE("standard_gap frozen examples and property") {
  MonoidSpec q = make_monoid(MonoidKind::RationalsNonneg);
  MonoidSpec t = make_monoid(MonoidKind::TruncatedUnitRationals);
  MonoidSpec u = make_monoid(MonoidKind::UltrametricRationals);
  CHECK(standard_gap(q, Dist(1), Dist(0)) == Dist(Rat(1, 2)));
  CHECK(standard_gap(t, Dist(1), Dist(Rat(9, 10))) == Dist(Rat(1, 20)));
  CHECK(standard_gap(u, Dist(5), Dist(3)) == Dist(4));
  for (MonoidKind k : {MonoidKind::RationalsNonneg, MonoidKind::TruncatedUnitRationals,
                       MonoidKind::LexPairRationals, MonoidKind::UltrametricRationals}) {
    MonoidSpec m = make_monoid(k);
    std::vector<Dist> grid = grid_values(m, k == MonoidKind::LexPairRationals ? 2 : 5);
    for (const Dist& r : grid)
      for (const Dist& s : grid) {
        if (r.is_zero() || s >= r) continue;
        Dist gap = standard_gap(m, r, s);
        CHECK(!gap.is_zero());
        CHECK(plus(m, s, gap) < r);
      }
  }
  CHECK_THROWS_AS(standard_gap(q, Dist(0), Dist(0)), Error);
}

TEST_CASE("grid respects the carrier") {
  MonoidSpec t = make_monoid(MonoidKind::TruncatedUnitRationals);
  for (const Dist& d : grid_values(t, 8)) CHECK(d <= *t.top);
  MonoidSpec l = make_monoid(MonoidKind::LexPairRationals);
  for (const Dist& d : grid_values(l, 2)) CHECK(in_carrier(l, d));
  CHECK(in_carrier(l, Dist(Rat(1), Rat(-7))));
  CHECK(!in_carrier(l, Dist(Rat(0), Rat(-1))));
}

TEST_CASE("dist serialization") {
  MonoidSpec q = make_monoid(MonoidKind::RationalsNonneg);
  MonoidSpec l = make_monoid(MonoidKind::LexPairRationals);
  CHECK(dist_parse(q, "3/4") == Dist(Rat(3, 4)));
  CHECK(dist_parse(l, "1/2,-3") == Dist(Rat(1, 2), Rat(-3)));
  CHECK(monoid_kind_from_name("q_ultra") == MonoidKind::UltrametricRationals);
  CHECK_THROWS_AS(monoid_kind_from_name("nope"), Error);
  CHECK_THROWS_AS(dist_parse(q, "-1"), Error);
}
