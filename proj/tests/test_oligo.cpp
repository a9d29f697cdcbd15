#include <doctest.h>

#include "homog/oligo.hpp"

using namespace homog;

TEST_CASE("acl per kind") {
  auto pure = OligoStructure::pure_set();
  CHECK(pure.acl({3, 7}) == FinSet{3, 7});
  CHECK(pure.acl({}) == FinSet{});

  auto ord = OligoStructure::dense_order();
  CHECK(ord.acl({0, 2}) == FinSet{0, 2});

  auto v2 = OligoStructure::vec_fq(2);
  Elem e1 = v2.vec_basis(0), e2 = v2.vec_basis(1);
  CHECK(v2.acl({e1}) == FinSet{0, e1});
  CHECK(v2.acl({}) == FinSet{0});
  CHECK(v2.acl({e1, e2}) == FinSet{0, e1, e2, v2.vec_add(e1, e2)});

  auto k3 = OligoStructure::copies_kn(3);
  CHECK(k3.acl({1}) == FinSet{0, 1, 2});
  CHECK(k3.acl({}) == FinSet{});

  auto rg = OligoStructure::random_graph();
  CHECK(rg.acl({0, 1}) == FinSet{0, 1});

  auto af = OligoStructure::affine_fq(2);
  CHECK(af.acl({}) == FinSet{});
  CHECK(af.acl({5}) == FinSet{5});
  // hull of three points includes the fourth parallelogram vertex
  Elem a = 0, b = af.vec_basis(0), c = af.vec_basis(1);
  CHECK(af.acl({a, b, c}) == FinSet{0, b, c, af.vec_add(b, c)});
}

TEST_CASE("acl is monotone and idempotent") {
  auto v3 = OligoStructure::vec_fq(3);
  Elem e1 = v3.vec_basis(0), e2 = v3.vec_basis(1);
  FinSet small = v3.acl({e1});
  FinSet big = v3.acl({e1, e2});
  CHECK(subset_of(small, big));
  CHECK(v3.acl(big) == big);
  auto k3 = OligoStructure::copies_kn(3);
  CHECK(k3.acl(k3.acl({4})) == k3.acl({4}));
}

TEST_CASE("orbit_eq per kind") {
  auto ord = OligoStructure::dense_order();
  Elem a1 = ord.order_insert(Rat(1)), a2 = ord.order_insert(Rat(2));
  Elem a3 = ord.order_insert(Rat(3)), a7 = ord.order_insert(Rat(7));
  CHECK(ord.orbit_eq({a1, a2}, {a3, a7}));
  CHECK(!ord.orbit_eq({a1, a2}, {a2, a1}));

  auto v2 = OligoStructure::vec_fq(2);
  Elem e1 = v2.vec_basis(0), e2 = v2.vec_basis(1);
  CHECK(v2.orbit_eq({e1}, {v2.vec_add(e1, e2)}));
  CHECK(!v2.orbit_eq({e1}, {0}));
  CHECK(v2.orbit_eq({e1, e2}, {e2, v2.vec_add(e1, e2)}));
  CHECK(!v2.orbit_eq({e1, e2}, {e1, e1}));
  // dependent on the left, independent on the right
  CHECK(!v2.orbit_eq({e1, e1}, {e1, e2}));

  auto k3 = OligoStructure::copies_kn(3);
  CHECK(k3.orbit_eq({0, 1}, {3, 5}));   // same copy twice
  CHECK(!k3.orbit_eq({0, 1}, {0, 3}));  // same copy vs different copies

  auto rb = OligoStructure::random_bipartite();
  Elem left = 0, right = 1;
  CHECK(rb.side_of(left) == 0);
  CHECK(rb.side_of(right) == 1);
  CHECK(!rb.orbit_eq({left}, {right}));
}

TEST_CASE("orbit_eq is an equivalence and respects automorphism images") {
  auto v2 = OligoStructure::vec_fq(2);
  SplitMix64 rng(5);
  std::vector<FinTuple> tuples;
  for (int i = 0; i < 12; ++i) {
    FinTuple t;
    for (int j = 0; j < 3; ++j) t.push_back(Elem(rng.below(v2.universe_size())));
    tuples.push_back(t);
  }
  for (const auto& t : tuples) CHECK(v2.orbit_eq(t, t));
  for (const auto& t : tuples)
    for (const auto& u : tuples) {
      CHECK(v2.orbit_eq(t, u) == v2.orbit_eq(u, t));
      if (!v2.orbit_eq(t, u)) continue;
      for (const auto& w : tuples)
        if (v2.orbit_eq(u, w)) CHECK(v2.orbit_eq(t, w));
    }
  // automorphism images stay in the same orbit
  for (const auto& t : tuples) {
    PartialAut g;
    for (Elem e : as_set(t)) g = extend_automorphism(v2, g, e);
    CHECK(v2.orbit_eq(t, g.apply_tuple(t)));
  }
}

TEST_CASE("sim_class") {
  auto pure = OligoStructure::pure_set();
  CHECK(pure.sim_class(4) == FinSet{4});
  auto k3 = OligoStructure::copies_kn(3);
  CHECK(k3.sim_class(4) == FinSet{3, 4, 5});
  auto v2 = OligoStructure::vec_fq(2);
  CHECK(v2.sim_class(v2.vec_basis(0)) == FinSet{v2.vec_basis(0)});
  auto v3 = OligoStructure::vec_fq(3);
  Elem e1 = v3.vec_basis(0);
  CHECK(v3.sim_class(e1) == FinSet{e1, v3.vec_scale(2, e1)});
  // symmetry of the class relation on same-orbit pairs
  for (Elem a : {Elem(1), Elem(4)}) {
    for (Elem b : k3.sim_class(a)) CHECK(set_contains(k3.sim_class(b), a));
  }
}

TEST_CASE("formulaic acl agrees with the brute-force stabilizer-orbit oracle") {
  // small version of the full acceptance run: subsets of size <= 2
  auto check_kind = [](OligoStructure S, std::size_t trunc) {
    S.ensure_size(trunc);
    std::vector<FinSet> subsets;
    subsets.push_back({});
    for (Elem a = 0; a < trunc; ++a) {
      subsets.push_back({a});
      for (Elem b = a + 1; b < trunc; ++b) subsets.push_back(as_set({a, b}));
    }
    for (const FinSet& A : subsets) {
      OligoStructure probe = S;
      FinSet oracle = brute_force_acl(probe, A, trunc);
      FinSet formulaic;
      for (Elem e : S.acl(A))
        if (e < trunc) formulaic.push_back(e);
      CHECK(oracle == formulaic);
    }
  };
  check_kind(OligoStructure::pure_set(), 6);
  check_kind(OligoStructure::dense_order(), 6);
  check_kind(OligoStructure::vec_fq(2), 8);
  check_kind(OligoStructure::copies_kn(3), 6);
  check_kind(OligoStructure::random_graph(), 6);
  check_kind(OligoStructure::affine_fq(2), 8);
}

TEST_CASE("extend_automorphism") {
  auto pure = OligoStructure::pure_set();
  PartialAut g;
  g = extend_automorphism(pure, g, 3);
  CHECK(g.apply(3) == Elem(3));  // target-first tie break

  auto ord = OligoStructure::dense_order();
  Elem one = ord.order_insert(Rat(1)), two = ord.order_insert(Rat(2));
  Elem zero = ord.order_insert(Rat(0));
  PartialAut h;
  h.set(one, two);
  h = extend_automorphism(ord, h, zero);
  CHECK(ord.order_value(*h.apply(zero)) < Rat(2));

  auto v3 = OligoStructure::vec_fq(3);
  Elem e1 = v3.vec_basis(0), e2 = v3.vec_basis(1);
  PartialAut lin;
  lin.set(e1, e2);
  lin = extend_automorphism(v3, lin, e2);
  // image of e2 must stay independent from image of e1
  CHECK(!set_contains(v3.vec_span({e2}), *lin.apply(e2)));
  // forced linear image: e1+e2 maps to the sum of the images
  Elem sum = v3.vec_add(e1, e2);
  lin = extend_automorphism(v3, lin, sum);
  CHECK(*lin.apply(sum) == v3.vec_add(*lin.apply(e1), *lin.apply(e2)));
  CHECK(is_partial_auto(v3, lin));
}

TEST_CASE("neumann witness") {
  auto pure = OligoStructure::pure_set();
  // D inside C: identity
  PartialAut id = neumann_witness(pure, {1, 2}, {1}, {0, 1, 2, 3});
  CHECK(id.fixes({1, 2}));
  CHECK(*id.apply(1) == 1);

  PartialAut g = neumann_witness(pure, {1}, {1, 2}, {1, 2, 3});
  CHECK(*g.apply(1) == 1);
  CHECK(*g.apply(2) != 2);
  CHECK(!set_contains({1, 2, 3}, *g.apply(2)));

  auto v2 = OligoStructure::vec_fq(2);
  Elem e1 = v2.vec_basis(0), e2 = v2.vec_basis(1), e3 = v2.vec_basis(2);
  FinSet C = v2.vec_span({e1});
  FinSet D = v2.vec_span({e1, e2});
  FinSet B = v2.vec_span({e1, e2, e3});
  PartialAut w = neumann_witness(v2, C, D, B);
  FinTuple dt(D.begin(), D.end());
  FinSet image = as_set(w.apply_tuple(dt));
  CHECK(set_intersect(image, B) == set_intersect(set_intersect(C, D), B));
}

TEST_CASE("agreeing pair") {
  auto rb = OligoStructure::random_bipartite();
  rb.ensure_size(10);
  Elem a = 1;  // right-side vertex
  REQUIRE(rb.side_of(a) == 1);
  auto [alpha, beta] = agreeing_pair(rb, InvariantSet::BipartiteLeft, a, 8);
  CHECK(alpha.apply(a) != beta.apply(a));
  for (const auto& [x, y] : alpha.pairs) {
    if (rb.side_of(x) == 0) CHECK(beta.apply(x) == y);
  }
  CHECK(rb.orbit_eq(beta.sources(), beta.images()));

  auto pure = OligoStructure::pure_set();
  auto [pa, pb] = agreeing_pair(pure, InvariantSet::Empty, 2, 5);
  CHECK(pa.apply(2) != pb.apply(2));
  CHECK(pure.orbit_eq(pb.sources(), pb.images()));

  auto v2 = OligoStructure::vec_fq(2);
  CHECK_THROWS_AS(agreeing_pair(v2, InvariantSet::Empty, 0, 4), Error);  // 0 is definable
}

TEST_CASE("image disjoint pair") {
  auto v2 = OligoStructure::vec_fq(2);
  FinSet X = v2.vec_span({v2.vec_basis(0)});
  auto [alpha, beta] = image_disjoint_pair(v2, X, 8);
  for (Elem x : X) {
    CHECK(*alpha.apply(x) == x);
    CHECK(*beta.apply(x) == x);
  }
  FinSet ia = as_set(alpha.images()), ib = as_set(beta.images());
  CHECK(set_intersect(ia, ib) == X);
  CHECK(v2.orbit_eq(beta.sources(), beta.images()));

  auto pure = OligoStructure::pure_set();
  auto [pa, pb] = image_disjoint_pair(pure, {}, 5);
  CHECK(set_intersect(as_set(pa.images()), as_set(pb.images())).empty());
}

TEST_CASE("element names round trip") {
  auto v3 = OligoStructure::vec_fq(3);
  Elem v = v3.vec_add(v3.vec_basis(0), v3.vec_scale(2, v3.vec_basis(2)));
  CHECK(v3.elem_name(v) == "e1+2e3");
  CHECK(v3.elem_parse("e1+2e3") == v);
  CHECK(v3.elem_parse("0") == 0);
  auto pure = OligoStructure::pure_set();
  CHECK(pure.elem_parse("5") == 5);
  CHECK(pure.elem_name(5) == "5");
}
