#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "homog/chains.hpp"
#include "homog/embedding.hpp"
#include "homog/generator.hpp"
#include "homog/indep.hpp"
#include "homog/monoid.hpp"
#include "homog/opensets.hpp"
#include "homog/oligo.hpp"
#include "homog/report.hpp"
#include "homog/space.hpp"
#include "homog/words.hpp"

namespace homog::checks {

struct Options {
  bool quick = false;
  std::uint64_t seed = 7;
  std::string inject_fault;  // test fixture: name of a check to corrupt
};

namespace detail {

/// Oracle-side monoid arithmetic on raw mpq workspaces: written separately
/// from the library's plus so the exhaustive checks have an independent
/// second route, and allocation-free so the level-12 grids stay fast.
struct OracleOps {
  MonoidKind kind;
  mpq_t top, wa, wb;

  explicit OracleOps(const MonoidSpec& m) : kind(m.kind) {
    mpq_inits(top, wa, wb, nullptr);
    if (m.bounded()) mpq_set(top, m.top->a.raw());
  }
  OracleOps(const OracleOps&) = delete;
  OracleOps& operator=(const OracleOps&) = delete;
  ~OracleOps() { mpq_clears(top, wa, wb, nullptr); }

  // r <= s (+) t, evaluated with the oracle's own addition
  bool reaches(const Dist& r, const Dist& s, const Dist& t) {
    switch (kind) {
      case MonoidKind::RationalsNonneg:
        mpq_add(wa, s.a.raw(), t.a.raw());
        return mpq_cmp(r.a.raw(), wa) <= 0;
      case MonoidKind::TruncatedUnitRationals:
        mpq_add(wa, s.a.raw(), t.a.raw());
        if (mpq_cmp(wa, top) > 0) mpq_set(wa, top);
        return mpq_cmp(r.a.raw(), wa) <= 0;
      case MonoidKind::UltrametricRationals: {
        const mpq_srcptr mx =
            mpq_cmp(s.a.raw(), t.a.raw()) >= 0 ? s.a.raw() : t.a.raw();
        return mpq_cmp(r.a.raw(), mx) <= 0;
      }
      case MonoidKind::LexPairRationals: {
        mpq_add(wa, s.a.raw(), t.a.raw());
        int c = mpq_cmp(r.a.raw(), wa);
        if (c != 0) return c < 0;
        mpq_add(wb, s.b.raw(), t.b.raw());
        return mpq_cmp(r.b.raw(), wb) <= 0;
      }
    }
    return false;
  }
};

}  // namespace detail

// c1: truncated difference equals the brute-force least element on the grid,
// plus both residuation clauses, exhaustively (against an independent
// oracle-side addition).
inline Check c1_minus_oracle(const Options& opt) {
  Stopwatch sw;
  Check out;
  out.name = "c01_minus_oracle";
  const int scalar_level = opt.quick ? 6 : 12;
  const int lex_level = opt.quick ? 2 : 3;
  out.params = "grid<=" + std::to_string(scalar_level) + " (lex " + std::to_string(lex_level) +
               "), all four monoids";
  bool inject = opt.inject_fault == "minus";
  long checked = 0;
  for (MonoidKind k : {MonoidKind::RationalsNonneg, MonoidKind::TruncatedUnitRationals,
                       MonoidKind::UltrametricRationals, MonoidKind::LexPairRationals}) {
    MonoidSpec m = make_monoid(k);
    detail::OracleOps ops(m);
    std::vector<Dist> grid =
        grid_values(m, k == MonoidKind::LexPairRationals ? lex_level : scalar_level);
    // clause (1) + grid minimality of the difference
    std::vector<Dist> diffs;  // r(-)s per (r,s) pair, reused by clause (2)
    for (const Dist& r : grid)
      for (const Dist& s : grid) {
        if (s > r) continue;
        Dist d = minus(m, r, s);
        if (inject && k == MonoidKind::RationalsNonneg && r == Dist(5) && s == Dist(3))
          d = Dist(1);  // deliberately broken value for the fault fixture
        if (!ops.reaches(r, s, d)) {
          out.status = "violation";
          out.witness = std::string(monoid_kind_name(k)) + ": " + dist_str(m, r) + " (-) " +
                        dist_str(m, s) + " -> " + dist_str(m, d) + " does not reach back";
          out.runtime_ms = sw.ms();
          return out;
        }
        for (const Dist& t : grid) {
          ++checked;
          if (ops.reaches(r, s, t) != (d <= t)) {
            out.status = "violation";
            out.witness = std::string(monoid_kind_name(k)) + ": clause 1 fails at r=" +
                          dist_str(m, r) + " s=" + dist_str(m, s) + " t=" + dist_str(m, t);
            out.runtime_ms = sw.ms();
            return out;
          }
        }
        diffs.push_back(d);
      }
    // clause (2): s <= t(+)u implies r <= t(+)u(+)(r(-)s); the sums t(+)u are
    // deduplicated, and sums below s have a false antecedent by the order
    std::vector<Dist> sums;
    for (const Dist& t : grid)
      for (const Dist& u : grid) {
        if (u > t) continue;
        sums.push_back(plus(m, t, u));
      }
    std::sort(sums.begin(), sums.end());
    sums.erase(std::unique(sums.begin(), sums.end()), sums.end());
    Dist zero(Rat(0));
    std::size_t di = 0;
    for (const Dist& r : grid)
      for (const Dist& s : grid) {
        if (s > r) continue;
        const Dist& d = diffs[di++];
        auto lo = std::lower_bound(sums.begin(), sums.end(), s);
        for (auto it = lo; it != sums.end(); ++it) {
          ++checked;
          if (!ops.reaches(r, *it, d)) {
            out.status = "violation";
            out.witness = std::string(monoid_kind_name(k)) + ": clause 2 fails at r=" +
                          dist_str(m, r) + " s=" + dist_str(m, s) + " w=" + dist_str(m, *it);
            out.runtime_ms = sw.ms();
            return out;
          }
        }
      }
  }
  out.status = "ok";
  out.witness = std::to_string(checked) + " comparisons";
  out.runtime_ms = sw.ms();
  return out;
}

// c2: independent amalgams of seeded random pairs are valid spaces.
inline Check c2_amalgam(const Options& opt) {
  Stopwatch sw;
  Check out;
  out.name = "c02_amalgam_validity";
  const int runs = opt.quick ? 60 : 500;
  out.params = std::to_string(runs) + " pairs per monoid, <=8 points";
  for (MonoidKind k : {MonoidKind::RationalsNonneg, MonoidKind::TruncatedUnitRationals,
                       MonoidKind::UltrametricRationals, MonoidKind::LexPairRationals}) {
    MonoidSpec m = make_monoid(k);
    SplitMix64 rng(opt.seed ^ (0x100 + std::uint64_t(k)));
    for (int i = 0; i < runs; ++i) {
      Space a = random_space(m, rng, 8);
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
      for (int extra = int(rng.below(4)); extra > 0 && b.size() < 8; --extra) {
        std::vector<PointId> base;
        for (PointId p = 0; p < b.size(); ++p) base.push_back(p);
        b = extend_one_point(b, random_katetov_request(b, rng, base)).first;
      }
      PartialIsometry glue;
      for (std::size_t x = 0; x < c.size(); ++x) glue.add(c[x], PointId(x));
      auto res = amalgam(a, b, glue);
      if (auto v = validate_space(res.space)) {
        out.status = "violation";
        out.witness = std::string(monoid_kind_name(k)) + " run " + std::to_string(i) +
                      ": axiom " + std::to_string(int(v->axiom)) + " at (" +
                      std::to_string(v->x) + "," + std::to_string(v->y) + ")";
        out.runtime_ms = sw.ms();
        return out;
      }
    }
  }
  out.status = "ok";
  out.runtime_ms = sw.ms();
  return out;
}

namespace detail {

inline std::vector<Dist> pinch_epsilons(MonoidKind k) {
  if (k == MonoidKind::TruncatedUnitRationals) return {Dist(Rat(1, 2)), Dist(1)};
  return {Dist(Rat(1, 2)), Dist(1), Dist(Rat(3, 2))};
}

}  // namespace detail

// c3: the pinching pair invariants hold at every stage of a full run.
inline Check c3_pinching(const Options& opt) {
  Stopwatch sw;
  Check out;
  out.name = "c03_pinching_invariants";
  const int advances = opt.quick ? 12 : 30;
  out.params = std::to_string(advances) + " advances, eps in {1/2,1,3/2}";
  for (MonoidKind k : {MonoidKind::RationalsNonneg, MonoidKind::TruncatedUnitRationals}) {
    for (const Dist& eps : detail::pinch_epsilons(k)) {
      auto g = make_generator(make_monoid(k));
      g->run(24);
      auto [phi, psi] = pinching_pair(g, 0, eps);
      for (int i = 0; i < advances; ++i) {
        phi.advance();
        psi.advance();
        if (!embedding_isometric_on_explored(phi) || !embedding_isometric_on_explored(psi)) {
          out.status = "violation";
          out.witness = std::string(monoid_kind_name(k)) + " eps=" + eps.str() +
                        ": side not isometric at stage " + std::to_string(i);
          out.runtime_ms = sw.ms();
          return out;
        }
        for (const auto& [x, bx] : phi.explored_pairs()) {
          PointId cx = psi.eval(x);
          Dist alpha = g->distance(0, x);
          bool agree = (bx == cx);
          bool outside = (alpha >= eps);
          bool gap_ok =
              agree || g->distance(bx, cx) >= minus(g->monoid(), eps, alpha);
          if (agree != outside || !gap_ok) {
            out.status = "violation";
            out.witness = std::string(monoid_kind_name(k)) + " eps=" + eps.str() + " point " +
                          std::to_string(x) + ": alpha=" + alpha.str() +
                          (agree ? " sides agree" : " sides differ");
            out.runtime_ms = sw.ms();
            return out;
          }
        }
      }
    }
  }
  out.status = "ok";
  out.runtime_ms = sw.ms();
  return out;
}

// c4: the spreading pair invariants hold on every explored prefix.
inline Check c4_spreading(const Options& opt) {
  Stopwatch sw;
  Check out;
  out.name = "c04_spreading_invariants";
  const int advances = opt.quick ? 12 : 30;
  out.params = std::to_string(advances) + " advances, eps in {1/2,1,3/2}";
  for (MonoidKind k : {MonoidKind::RationalsNonneg, MonoidKind::TruncatedUnitRationals}) {
    for (const Dist& eps : detail::pinch_epsilons(k)) {
      auto g = make_generator(make_monoid(k));
      g->run(24);
      auto [sigma, theta] = spreading_pair(g, 0, eps);
      if (sigma.eval(0) != 0 || theta.eval(0) != 0) {
        out.status = "violation";
        out.witness = "anchor not fixed";
        out.runtime_ms = sw.ms();
        return out;
      }
      for (int i = 0; i < advances; ++i) {
        sigma.advance();
        theta.advance();
      }
      if (!embedding_isometric_on_explored(sigma) || !embedding_isometric_on_explored(theta)) {
        out.status = "violation";
        out.witness = "side not isometric";
        out.runtime_ms = sw.ms();
        return out;
      }
      for (const auto& [x, bx] : sigma.explored_pairs())
        for (const auto& [y, cy] : theta.explored_pairs()) {
          if (g->distance(bx, cy) < eps && !(g->distance(0, bx) < eps)) {
            out.status = "violation";
            out.witness = std::string(monoid_kind_name(k)) + " eps=" + eps.str() +
                          ": ball containment fails at (" + std::to_string(bx) + "," +
                          std::to_string(cy) + ")";
            out.runtime_ms = sw.ms();
            return out;
          }
        }
    }
  }
  out.status = "ok";
  out.runtime_ms = sw.ms();
  return out;
}

// c5: the O-set membership of sampled embeddings agrees pointwise with the
// pinching-pair disagreement criterion.
inline Check c5_ocharacterization(const Options& opt) {
  Stopwatch sw;
  Check out;
  out.name = "c05_o_characterization";
  const std::size_t samples = opt.quick ? 20 : 100;
  const int depth = opt.quick ? 12 : 30;
  out.params = std::to_string(samples) + " samples, depth " + std::to_string(depth);
  auto g = make_generator(make_monoid(MonoidKind::RationalsNonneg));
  g->run(30);
  OCharReport rep = check_O_characterization(g, 0, Dist(1), samples, depth, opt.seed);
  if (!rep.ok()) {
    out.status = "violation";
    out.witness = rep.violation_notes.empty() ? "decided violation" : rep.violation_notes.front();
  } else {
    out.status = "ok";
    out.witness = std::to_string(rep.points_checked) + " points checked, " +
                  std::to_string(rep.points_unchecked) + " unchecked, " +
                  std::to_string(rep.samples_inconclusive) + "/" + std::to_string(rep.samples) +
                  " samples inconclusive";
  }
  out.runtime_ms = sw.ms();
  return out;
}

// c6: the two-sided containment between W-sets and the spreading Z-set.
inline Check c6_containments(const Options& opt) {
  Stopwatch sw;
  Check out;
  out.name = "c06_containment_chain";
  const std::size_t samples = opt.quick ? 20 : 100;
  const int depth = opt.quick ? 8 : 20;
  out.params = std::to_string(samples) + " samples, zeta=1/4 eta=1/4 eps=1/2";
  std::size_t w_members = 0, z_decided = 0, inconclusive = 0;
  for (MonoidKind k : {MonoidKind::RationalsNonneg, MonoidKind::TruncatedUnitRationals}) {
    auto g = make_generator(make_monoid(k));
    g->run(30);
    PointId b = g->realize_type({{0}, {Dist(k == MonoidKind::RationalsNonneg ? 3 : 1)}});
    ContainmentReport rep = check_containments(g, 0, b, Dist(Rat(1, 4)), Dist(Rat(1, 4)),
                                               Dist(Rat(1, 2)), samples, depth, opt.seed);
    if (!rep.ok()) {
      out.status = "violation";
      out.witness = rep.notes.empty() ? "decided counterexample" : rep.notes.front();
      out.runtime_ms = sw.ms();
      return out;
    }
    w_members += rep.w_members;
    z_decided += rep.z_members_decided;
    inconclusive += rep.inconclusive;
  }
  out.status = "ok";
  out.witness = std::to_string(w_members) + " W-members, " + std::to_string(z_decided) +
                " decided Z-members, " + std::to_string(inconclusive) + " inconclusive";
  out.runtime_ms = sw.ms();
  return out;
}

// c7: separation witnesses for seeded finite constraints.
inline Check c7_separation(const Options& opt) {
  Stopwatch sw;
  Check out;
  out.name = "c07_separation_witness";
  const int runs = opt.quick ? 8 : 20;
  out.params = std::to_string(runs) + " seeded constraints per monoid";
  for (MonoidKind k : {MonoidKind::RationalsNonneg, MonoidKind::TruncatedUnitRationals}) {
    auto g = make_generator(make_monoid(k));
    g->run(30);
    SplitMix64 rng(opt.seed ^ (0x700 + std::uint64_t(k)));
    for (int i = 0; i < runs; ++i) {
      // random finite partial isometry of 1..3 points
      PartialIsometry phi;
      std::size_t want = 1 + rng.below(3);
      for (std::size_t j = 0; j < want; ++j) {
        PointId t = PointId(rng.below(std::min<std::size_t>(g->size(), 12)));
        if (phi.in_domain(t)) continue;
        if (rng.below(2)) {
          phi.add(t, g->extend_partial_isometry(phi, t));
        } else {
          // bias toward maps moving points: extend from a shifted anchor
          PartialIsometry probe = phi;
          PointId img = g->extend_partial_isometry(probe, t);
          phi.add(t, img);
        }
      }
      PointId a = PointId(rng.below(std::min<std::size_t>(g->size(), 12)));
      PointId b = PointId(rng.below(std::min<std::size_t>(g->size(), 12)));
      Dist eps = (k == MonoidKind::TruncatedUnitRationals || rng.below(2)) ? Dist(Rat(1, 2))
                                                                           : Dist(1);
      Embedding s = separation_witness(g, phi, a, b, eps);
      bool in_w = g->distance(s.eval(a), b) < eps;
      bool moved = false;
      for (const auto& [src, dst] : phi.pairs) moved |= (s.eval(src) != dst);
      if (!in_w || !moved || !embedding_isometric_on_explored(s)) {
        out.status = "violation";
        out.witness = std::string(monoid_kind_name(k)) + " run " + std::to_string(i) +
                      (in_w ? ": no disagreement with the constraint" : ": witness outside W");
        out.runtime_ms = sw.ms();
        return out;
      }
    }
  }
  out.status = "ok";
  out.runtime_ms = sw.ms();
  return out;
}

// c8: formulaic closure vs the brute-force stabilizer-orbit oracle.
inline Check c8_acl_oracle(const Options& opt) {
  Stopwatch sw;
  Check out;
  out.name = "c08_acl_oracle";
  const std::size_t max_subset = opt.quick ? 2 : 3;
  out.params = "subsets of size <= " + std::to_string(max_subset) + " of 8-element truncations";
  std::vector<std::pair<std::string, OligoStructure>> kinds;
  kinds.emplace_back("pure_set", OligoStructure::pure_set());
  kinds.emplace_back("dense_order", OligoStructure::dense_order());
  kinds.emplace_back("vec_f2", OligoStructure::vec_fq(2, 3));
  kinds.emplace_back("copies_k3", OligoStructure::copies_kn(3));
  kinds.emplace_back("random_graph", OligoStructure::random_graph());
  kinds.emplace_back("random_bipartite", OligoStructure::random_bipartite());
  kinds.emplace_back("affine_f2", OligoStructure::affine_fq(2, 3));
  for (auto& [name, S0] : kinds) {
    const std::size_t trunc = 8;
    S0.ensure_size(trunc);
    std::vector<FinSet> subsets;
    subsets.push_back({});
    for (Elem a = 0; a < trunc; ++a) {
      subsets.push_back({a});
      for (Elem b = a + 1; b < trunc; ++b) {
        if (max_subset >= 2) subsets.push_back(as_set({a, b}));
        for (Elem c = b + 1; c < trunc && max_subset >= 3; ++c)
          subsets.push_back(as_set({a, b, c}));
      }
    }
    for (const FinSet& A : subsets) {
      OligoStructure probe = S0;
      FinSet oracle = brute_force_acl(probe, A, trunc);
      FinSet formulaic;
      for (Elem e : S0.acl(A))
        if (e < trunc) formulaic.push_back(e);
      if (oracle != formulaic) {
        out.status = "violation";
        out.witness = name + ": closure of " + detail_indep::set_str(S0, A) +
                      " disagrees with the orbit oracle";
        out.runtime_ms = sw.ms();
        return out;
      }
    }
  }
  out.status = "ok";
  out.runtime_ms = sw.ms();
  return out;
}

// c9: the independence axiom suite on the tame structures, plus the affine
// base-monotonicity regression fixture.
inline Check c9_axioms(const Options& opt) {
  Stopwatch sw;
  Check out;
  out.name = "c09_independence_axioms";
  const std::size_t samples = opt.quick ? 100 : 500;
  out.params = std::to_string(samples) + " samples per structure";
  IndepRelation rel = algebraic_independence();
  std::vector<std::pair<std::string, OligoStructure>> tame;
  tame.emplace_back("vec_f2", OligoStructure::vec_fq(2, 3));
  tame.emplace_back("pure_set", OligoStructure::pure_set());
  tame.emplace_back("copies_k3", OligoStructure::copies_kn(3));
  for (auto& [name, S] : tame) {
    AxiomReport rep = axiom_suite(S, rel, samples, opt.seed);
    if (!rep.exact_ok() || rep.get("base-monotonicity").violations > 0) {
      out.status = "violation";
      for (const auto& st : rep.stats)
        if (st.violations > 0) {
          out.witness = name + ": " + st.name + " fails, witness " + st.witness;
          break;
        }
      out.runtime_ms = sw.ms();
      return out;
    }
  }
  auto affine = OligoStructure::affine_fq(2, 3);
  AxiomReport rep = axiom_suite(affine, rel, samples, opt.seed + 1);
  const AxiomStat& bm = rep.get("base-monotonicity");
  if (bm.violations == 0) {
    out.status = "violation";
    out.witness = "affine fixture produced no base-monotonicity violation";
  } else {
    out.status = "ok";
    out.witness = "affine violations: " + std::to_string(bm.violations) + ", first " + bm.witness;
  }
  out.runtime_ms = sw.ms();
  return out;
}

// c10: stabilizer elements of the base all obtain chain membership witnesses.
inline Check c10_reachability(const Options& opt) {
  Stopwatch sw;
  Check out;
  out.name = "c10_reachability";
  const std::size_t samples = opt.quick ? 6 : 20;
  out.params = "vec_f2 dim 5, length-2 chain over span(e1), " + std::to_string(samples) +
               " samples";
  auto S = OligoStructure::vec_fq(2, 5);
  Elem e1 = S.vec_basis(0), e2 = S.vec_basis(1), e3 = S.vec_basis(2), e4 = S.vec_basis(3);
  FinSet A = S.vec_span({e1});
  Chain C;
  C.acl_closed = true;
  for (const FinSet& link : {S.vec_span({e1, e2}), S.vec_span({e1, e3}), S.vec_span({e1, e4})})
    C.tuples.emplace_back(link.begin(), link.end());
  ReachabilityReport rep = reachability_check(S, A, C, samples, 800000, opt.seed);
  if (rep.ok()) {
    out.status = "ok";
    out.witness = std::to_string(rep.witnessed) + "/" + std::to_string(rep.samples) +
                  " witnessed";
  } else if (rep.witnessed + rep.inconclusive == rep.samples && rep.converse_ok) {
    out.status = "inconclusive";
    out.witness = std::to_string(rep.inconclusive) + " searches hit the budget";
  } else {
    out.status = "violation";
    out.witness = "a stabilizer element admitted no witness chain";
  }
  out.runtime_ms = sw.ms();
  return out;
}

// c11: the centre machinery on VecF3 with the scalar gamma.
inline Check c11_centre(const Options& opt) {
  Stopwatch sw;
  Check out;
  out.name = "c11_centre_witness";
  const int type1_count = opt.quick ? 8 : 20;
  const int type2_count = opt.quick ? 2 : 5;
  out.params = "vec_f3 dim 4, gamma = scalar 2, " + std::to_string(type1_count) + "+" +
               std::to_string(type2_count) + " words";
  auto S = OligoStructure::vec_fq(3, 4);
  auto scalar = [&](int c) {
    std::vector<Elem> imgs;
    for (int i = 0; i < S.dim(); ++i) imgs.push_back(S.vec_scale(c, S.vec_basis(i)));
    return OligoMap::linear(S, imgs);
  };
  OligoMap gamma = scalar(2);
  SplitMix64 rng(opt.seed ^ 0xc11);
  auto random_gl = [&]() {
    // random invertible map: greedily independent basis images
    std::vector<Elem> imgs;
    FinSet span0 = {0};
    for (int i = 0; i < S.dim(); ++i) {
      while (true) {
        Elem cand = Elem(rng.below(S.universe_size()));
        if (!S.vec_in_span(as_set(FinTuple(imgs.begin(), imgs.end())), cand) && cand != 0) {
          imgs.push_back(cand);
          break;
        }
      }
    }
    (void)span0;
    return OligoMap::linear(S, imgs);
  };
  std::vector<InequalityWord> type1;
  while (int(type1.size()) < type1_count) {
    InequalityWord w;
    std::size_t n = 1 + rng.below(2);
    for (std::size_t i = 0; i <= n; ++i) w.left.push_back(random_gl());
    for (std::size_t i = 0; i <= n; ++i) w.right.push_back(random_gl());
    // keep only words the identity satisfies
    auto with_id = [&](Elem x) { return x; };
    bool sat = false;
    for (Elem x = 0; x < S.universe_size() && !sat; ++x)
      sat = eval_word_side(S, w.left, with_id, x) != eval_word_side(S, w.right, with_id, x);
    if (sat) type1.push_back(w);
  }
  std::vector<InequalityWord> type2;
  for (int i = 0; i < type2_count; ++i) {
    InequalityWord w;
    std::size_t n = 1 + rng.below(2);
    for (std::size_t i2 = 0; i2 <= n; ++i2) w.left.push_back(random_gl());
    for (std::size_t i2 = 0; i2 + 1 <= n; ++i2) w.right.push_back(random_gl());
    type2.push_back(w);
  }
  FinSet base = S.vec_span({S.vec_basis(0), S.vec_basis(1)});
  try {
    CentreWitnessReport rep = centre_witness(S, gamma, type1, type2, base, 40000);
    out.status = "ok";
    out.witness = std::to_string(rep.type1_verified) + " type-I verified, " +
                  std::to_string(rep.type2_solved) + " type-II solved, delta on " +
                  std::to_string(rep.delta.pairs.size()) + " points";
  } catch (const Error& e) {
    out.status = e.code() == Errc::BudgetExceeded ? "inconclusive" : "violation";
    out.witness = e.what();
  }
  out.runtime_ms = sw.ms();
  return out;
}

// c12: the three sink conditions for the even span.
inline Check c12_sink(const Options& opt) {
  Stopwatch sw;
  Check out;
  out.name = "c12_sink_conditions";
  const int depth = opt.quick ? 10 : 20;
  const std::size_t chain_samples = opt.quick ? 2 : 5;
  out.params = "vec_f2, even span, delta = closure of the empty set, k=1, depth " +
               std::to_string(depth);
  auto S = OligoStructure::vec_fq(2, 6);
  SubuniverseOracle omega = even_span_oracle();
  auto delta = [](Elem e) { return e == 0; };
  try {
    SinkReport rep = sink_check(S, omega, delta, 1, depth, chain_samples, opt.seed);
    if (rep.ok()) {
      out.status = "ok";
      out.witness = std::to_string(rep.equalizer_checked) + " equalizer points, " +
                    std::to_string(rep.chains_witnessed) + "/" +
                    std::to_string(rep.chains_sampled) + " chains, " +
                    std::to_string(rep.trace_checked) + " trace points";
    } else {
      out.status = "violation";
      out.witness = std::string(rep.equalizer_ok ? "" : "equalizer ") +
                    (rep.chains_witnessed == rep.chains_sampled ? "" : "chains ") +
                    (rep.trace_ok ? "" : "trace ") + "failed";
    }
  } catch (const Error& e) {
    out.status = "inconclusive";
    out.witness = e.what();
  }
  out.runtime_ms = sw.ms();
  return out;
}

/// All acceptance checks in order. The determinism criterion is a property of
/// whole reports and lives with the command-line front end.
inline std::vector<Check> run_all(const Options& opt) {
  std::vector<Check> out;
  out.push_back(c1_minus_oracle(opt));
  out.push_back(c2_amalgam(opt));
  out.push_back(c3_pinching(opt));
  out.push_back(c4_spreading(opt));
  out.push_back(c5_ocharacterization(opt));
  out.push_back(c6_containments(opt));
  out.push_back(c7_separation(opt));
  out.push_back(c8_acl_oracle(opt));
  out.push_back(c9_axioms(opt));
  out.push_back(c10_reachability(opt));
  out.push_back(c11_centre(opt));
  out.push_back(c12_sink(opt));
  return out;
}

}  // namespace homog::checks
