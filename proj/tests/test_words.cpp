#include <doctest.h>

#include "homog/words.hpp"

using namespace homog;

namespace {

OligoMap scalar_map(OligoStructure& S, int c) {
  std::vector<Elem> imgs;
  for (int i = 0; i < S.dim(); ++i) imgs.push_back(S.vec_scale(c, S.vec_basis(i)));
  return OligoMap::linear(S, imgs);
}

InequalityWord pure_set_word_II(OligoStructure& S) {
  // lambda_1 s lambda_0 != eta_0: one s on the left, none on the right
  PartialAut shift;  // a nontrivial permutation moving 0 <-> 1
  shift.set(0, 1);
  shift.set(1, 0);
  for (Elem v = 2; v < S.universe_size(); ++v) shift.set(v, v);
  InequalityWord w;
  w.left = {OligoMap::from_partial(shift), OligoMap::identity()};
  w.right = {OligoMap::identity()};
  return w;
}

}  // namespace

TEST_CASE("classify_inequality") {
  InequalityWord w;
  w.left = {OligoMap::identity(), OligoMap::identity(), OligoMap::identity()};
  w.right = {OligoMap::identity(), OligoMap::identity(), OligoMap::identity()};
  CHECK(classify_inequality(w) == WordType::TypeI);
  w.right.pop_back();
  CHECK(classify_inequality(w) == WordType::TypeII);
  w.right = {OligoMap::identity()};
  w.left = {OligoMap::identity()};
  CHECK(classify_inequality(w) == WordType::TypeI);  // constant inequality
  w.right.push_back(OligoMap::identity());
  CHECK_THROWS_AS(classify_inequality(w), Error);  // n < m
}

TEST_CASE("free sequence over the pure set") {
  auto S = OligoStructure::pure_set();
  FreeSeq st;
  st.b = {0};
  st.b_prime = {0};
  PairMap f0{OligoMap::identity(), OligoMap::identity()};
  st.a.emplace_back(2, 2);
  st.f.push_back(f0);
  REQUIRE(verify_free(S, st));
  for (int i = 0; i < 3; ++i) free_sequence_step(S, st, f0);
  CHECK(st.a.size() == 4);
  CHECK(verify_free(S, st));

  // breaking the sequence is detected
  FreeSeq bad = st;
  bad.a[1] = bad.a[0];
  CHECK_THROWS_AS(free_sequence_step(S, bad, f0), Error);
}

TEST_CASE("free sequence over VecF2 with the dimension growing on demand") {
  auto S = OligoStructure::vec_fq(2, 4);
  FreeSeq st;
  Elem e1 = S.vec_basis(0);
  st.b = {e1};
  st.b_prime = {e1};
  PairMap f{scalar_map(S, 1), scalar_map(S, 1)};
  st.a.emplace_back(S.vec_basis(1), S.vec_basis(1));
  st.f.push_back(f);
  REQUIRE(verify_free(S, st));
  for (int i = 0; i < 3; ++i) free_sequence_step(S, st, f);
  CHECK(verify_free(S, st));
  CHECK(S.dim() >= 4);
}

TEST_CASE("solve_type_II over the pure set") {
  auto S = OligoStructure::pure_set();
  InequalityWord w = pure_set_word_II(S);
  PartialAut delta = solve_type_II(S, w, PartialAut{});
  // delta satisfies the inequality at some point: verified internally, spot
  // check that it is a partial automorphism
  CHECK(is_partial_auto(S, delta));

  InequalityWord t1;
  t1.left = {OligoMap::identity()};
  t1.right = {OligoMap::identity()};
  CHECK_THROWS_AS(solve_type_II(S, t1, PartialAut{}), Error);
}

TEST_CASE("solve_type_II respects the neighbourhood constraint") {
  auto S = OligoStructure::vec_fq(3, 4);
  InequalityWord w;
  w.left = {scalar_map(S, 1), scalar_map(S, 2)};  // 2 s x vs x
  w.right = {scalar_map(S, 1)};
  PartialAut nbhd;
  for (Elem b : S.vec_span({S.vec_basis(0)})) nbhd.set(b, b);  // fix a 1-dim subspace
  PartialAut delta = solve_type_II(S, w, nbhd);
  for (Elem b : S.vec_span({S.vec_basis(0)})) CHECK(*delta.apply(b) == b);
}

TEST_CASE("automorphism generators and commutation") {
  auto v3 = OligoStructure::vec_fq(3, 4);
  CHECK(commutes_with_generators(v3, scalar_map(v3, 2)));
  CHECK(commutes_with_generators(v3, OligoMap::identity()));
  std::vector<Elem> tv;
  for (int i = 0; i < v3.dim(); ++i) tv.push_back(v3.vec_basis(i));
  tv[0] = v3.vec_add(v3.vec_basis(0), v3.vec_basis(1));
  CHECK(!commutes_with_generators(v3, OligoMap::linear(v3, tv)));
}

TEST_CASE("centre search finds the K2 involution and nothing for K3") {
  auto k2 = OligoStructure::copies_kn(2, 5);
  auto found2 = centre_search(k2);
  REQUIRE(found2.size() == 1);
  // the involution swaps within every copy
  CHECK(found2[0].eval(k2, 0) == 1);
  CHECK(found2[0].eval(k2, 5) == 4);

  auto k3 = OligoStructure::copies_kn(3, 5);
  CHECK(centre_search(k3).empty());

  auto v3 = OligoStructure::vec_fq(3, 4);
  CHECK(centre_search(v3).size() == 1);  // the scalar 2
}

TEST_CASE("centre witness on VecF3 with scalar gamma") {
  auto S = OligoStructure::vec_fq(3, 4);
  OligoMap gamma = scalar_map(S, 2);

  std::vector<InequalityWord> type1;
  for (int k = 0; k < 3; ++k) {
    InequalityWord w;
    w.left = {scalar_map(S, 1), scalar_map(S, 1)};
    std::vector<Elem> imgs;
    for (int i = 0; i < S.dim(); ++i) imgs.push_back(S.vec_basis((i + k + 1) % S.dim()));
    w.right = {OligoMap::linear(S, imgs), scalar_map(S, 1)};
    type1.push_back(w);
  }
  std::vector<InequalityWord> type2;
  for (int k = 0; k < 2; ++k) {
    InequalityWord w;
    w.left = {scalar_map(S, 1), scalar_map(S, k + 1)};
    w.right = {scalar_map(S, 1)};
    type2.push_back(w);
  }
  FinSet base = S.vec_span({S.vec_basis(0), S.vec_basis(1)});
  auto rep = centre_witness(S, gamma, type1, type2, base);
  CHECK(rep.central);
  CHECK(rep.type1_verified == 3);
  CHECK(rep.type2_solved == 2);
  for (Elem b : base) CHECK(*rep.delta.apply(b) == gamma.eval(S, b));

  // a non-central map is rejected
  std::vector<Elem> tv;
  for (int i = 0; i < S.dim(); ++i) tv.push_back(S.vec_basis(i));
  tv[0] = S.vec_add(S.vec_basis(0), S.vec_basis(1));
  CHECK_THROWS_AS(centre_witness(S, OligoMap::linear(S, tv), {}, {}, {}), Error);
}
