#include <doctest.h>

#include "homog/space.hpp"

using namespace homog;

namespace {

Space triangle(const MonoidSpec& m, Dist xy, Dist yz, Dist xz) {
  return make_space(m, 3,
                    {Dist(0), xy, xz,
                     xy, Dist(0), yz,
                     xz, yz, Dist(0)});
}

}  // namespace

TEST_CASE("validate_space catches each axiom") {
  MonoidSpec q = make_monoid(MonoidKind::RationalsNonneg);
  auto bad = validate_space(triangle(q, Dist(1), Dist(1), Dist(3)));
  REQUIRE(bad.has_value());
  CHECK(bad->axiom == MetricAxiom::Triangle);

  Space dup = make_space(q, 2, {Dist(0), Dist(0), Dist(0), Dist(0)});
  auto v = validate_space(dup);
  REQUIRE(v.has_value());
  CHECK(v->axiom == MetricAxiom::Identity);

  CHECK(!validate_space(triangle(q, Dist(1), Dist(1), Dist(1))).has_value());

  Space asym = triangle(q, Dist(1), Dist(1), Dist(1));
  asym.d(0, 1) = Dist(2);
  v = validate_space(asym);
  REQUIRE(v.has_value());
  CHECK(v->axiom == MetricAxiom::Symmetry);
}

TEST_CASE("check_partial_isometry") {
  MonoidSpec q = make_monoid(MonoidKind::RationalsNonneg);
  Space s = triangle(q, Dist(1), Dist(2), Dist(2));
  PartialIsometry empty;
  CHECK(!check_partial_isometry(empty, s, s).has_value());
  PartialIsometry ident;
  ident.add(0, 0);
  ident.add(1, 1);
  ident.add(2, 2);
  CHECK(!check_partial_isometry(ident, s, s).has_value());
  PartialIsometry collapse;
  collapse.add(0, 2);
  collapse.add(1, 2);
  auto v = check_partial_isometry(collapse, s, s);
  REQUIRE(v.has_value());
  CHECK(v->injectivity);
  PartialIsometry wrong;
  wrong.add(0, 0);
  wrong.add(1, 2);  // d(0,1)=1 but d(0,2)=2
  CHECK(check_partial_isometry(wrong, s, s).has_value());
  PartialIsometry missing;
  missing.add(7, 0);
  CHECK_THROWS_AS(check_partial_isometry(missing, s, s), Error);
}

TEST_CASE("amalgam with one glue point") {
  MonoidSpec q = make_monoid(MonoidKind::RationalsNonneg);
  Space a = make_space(q, 2, {Dist(0), Dist(2), Dist(2), Dist(0)});  // c,x
  Space b = make_space(q, 2, {Dist(0), Dist(3), Dist(3), Dist(0)});  // c,y
  PartialIsometry glue;
  glue.add(0, 0);
  auto res = amalgam(a, b, glue);
  CHECK(res.space.size() == 3);
  CHECK(res.space.d(res.from_a[1], res.from_b[1]) == Dist(5));
  CHECK(!validate_space(res.space).has_value());

  MonoidSpec t = make_monoid(MonoidKind::TruncatedUnitRationals);
  Space at = make_space(t, 2, {Dist(0), Dist(Rat(7, 10)), Dist(Rat(7, 10)), Dist(0)});
  Space bt = make_space(t, 2, {Dist(0), Dist(Rat(6, 10)), Dist(Rat(6, 10)), Dist(0)});
  auto rest = amalgam(at, bt, glue);
  CHECK(rest.space.d(rest.from_a[1], rest.from_b[1]) == Dist(1));
}

TEST_CASE("amalgam minimizes over a two-point glue") {
  // points of a: 0=c1, 1=c2, 2=x with d(c1,c2)=1, d(x,c1)=1, d(x,c2)=2
  // points of b: 0=c1, 1=c2, 2=y with d(y,c1)=3/2, d(y,c2)=1
  // d(x,y) = min(d(x,c1)+d(c1,y), d(x,c2)+d(c2,y)) = min(1+3/2, 2+1) = 5/2
  MonoidSpec q = make_monoid(MonoidKind::RationalsNonneg);
  Space a = make_space(q, 3,
                       {Dist(0), Dist(1), Dist(1),
                        Dist(1), Dist(0), Dist(2),
                        Dist(1), Dist(2), Dist(0)});
  Space b = make_space(q, 3,
                       {Dist(0), Dist(1), Dist(Rat(3, 2)),
                        Dist(1), Dist(0), Dist(1),
                        Dist(Rat(3, 2)), Dist(1), Dist(0)});
  REQUIRE(!validate_space(a).has_value());
  REQUIRE(!validate_space(b).has_value());
  PartialIsometry glue;
  glue.add(0, 0);
  glue.add(1, 1);
  auto res = amalgam(a, b, glue);
  CHECK(res.space.d(res.from_a[2], res.from_b[2]) == Dist(Rat(5, 2)));
  CHECK(!validate_space(res.space).has_value());
  PartialIsometry bad;
  bad.add(0, 0);
  bad.add(1, 2);  // d_a(0,1)=1 but d_b(0,2)=4
  CHECK_THROWS_AS(amalgam(a, b, bad), Error);
  CHECK_THROWS_AS(amalgam(a, b, PartialIsometry{}), Error);
}

TEST_CASE("check_katetov") {
  MonoidSpec q = make_monoid(MonoidKind::RationalsNonneg);
  Space s = make_space(q, 2, {Dist(0), Dist(2), Dist(2), Dist(0)});
  CHECK(!check_katetov(s, {{0, 1}, {Dist(1), Dist(1)}}).has_value());
  auto v = check_katetov(s, {{0, 1}, {Dist(1), Dist(4)}});
  CHECK(v.has_value());
  CHECK(!check_katetov(s, {{0}, {Dist(7)}}).has_value());  // singleton base
  CHECK_THROWS_AS(check_katetov(s, {{0}, {Dist(0)}}), Error);
}

TEST_CASE("extend_one_point") {
  MonoidSpec q = make_monoid(MonoidKind::RationalsNonneg);
  Space s = make_space(q, 2, {Dist(0), Dist(2), Dist(2), Dist(0)});
  auto [ext, p] = extend_one_point(s, {{0}, {Dist(1)}});
  CHECK(p == 2);
  CHECK(ext.d(p, 0) == Dist(1));
  CHECK(ext.d(p, 1) == Dist(3));  // amalgam formula
  CHECK(!validate_space(ext).has_value());

  auto [same, z] = extend_one_point(s, {{1}, {Dist(0)}});
  CHECK(z == 1);
  CHECK(same.size() == 2);

  CHECK_THROWS_AS(extend_one_point(s, {{0, 1}, {Dist(1), Dist(4)}}), Error);
}

TEST_CASE("random spaces and extensions are always valid") {
  for (MonoidKind k : {MonoidKind::RationalsNonneg, MonoidKind::TruncatedUnitRationals,
                       MonoidKind::LexPairRationals, MonoidKind::UltrametricRationals}) {
    MonoidSpec m = make_monoid(k);
    SplitMix64 rng(42 + std::uint64_t(k));
    for (int i = 0; i < 40; ++i) {
      Space s = random_space(m, rng, 8);
      CHECK(!validate_space(s).has_value());
      std::vector<PointId> base;
      for (PointId p = 0; p < s.size(); ++p)
        if (rng.below(2)) base.push_back(p);
      if (base.empty()) base.push_back(0);
      ExtensionRequest req = random_katetov_request(s, rng, base);
      CHECK(!check_katetov(s, req).has_value());
      auto [ext, p] = extend_one_point(s, req);
      CHECK(!validate_space(ext).has_value());
    }
  }
}

TEST_CASE("amalgam of random pairs is always a valid space") {
  for (MonoidKind k : {MonoidKind::RationalsNonneg, MonoidKind::UltrametricRationals}) {
    MonoidSpec m = make_monoid(k);
    SplitMix64 rng(7 + std::uint64_t(k));
    for (int i = 0; i < 30; ++i) {
      Space a = random_space(m, rng, 6);
      // carve an isometric copy of a subset of a into a fresh space b
      std::size_t csize = 1 + rng.below(a.size());
      std::vector<PointId> c;
      for (PointId p = 0; p < a.size() && c.size() < csize; ++p) c.push_back(p);
      Space b;
      b.monoid = m;
      b.points.resize(c.size());
      for (std::size_t x = 0; x < c.size(); ++x) b.points[x] = PointId(x);
      b.dist.assign(c.size() * c.size(), Dist());
      for (std::size_t x = 0; x < c.size(); ++x)
        for (std::size_t y = 0; y < c.size(); ++y) b.d(PointId(x), PointId(y)) = a.d(c[x], c[y]);
      for (int extra = int(rng.below(4)); extra > 0; --extra) {
        std::vector<PointId> base;
        for (PointId p = 0; p < b.size(); ++p) base.push_back(p);
        b = extend_one_point(b, random_katetov_request(b, rng, base)).first;
      }
      PartialIsometry glue;
      for (std::size_t x = 0; x < c.size(); ++x) glue.add(c[x], PointId(x));
      auto res = amalgam(a, b, glue);
      CHECK(!validate_space(res.space).has_value());
    }
  }
}
