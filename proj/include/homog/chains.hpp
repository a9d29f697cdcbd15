#pragma once

#include <optional>
#include <string>
#include <vector>

#include "homog/error.hpp"
#include "homog/indep_core.hpp"
#include "homog/oligo.hpp"
#include "homog/prng.hpp"

namespace homog {

/// A finite sequence of tuples; stabilizer products are never materialized,
/// membership is witnessed chainwise.
struct Chain {
  std::vector<FinTuple> tuples;
  bool acl_closed = false;

  std::size_t length() const { return tuples.empty() ? 0 : tuples.size() - 1; }
};

inline void check_chain(const OligoStructure& S, const Chain& C) {
  require(!C.tuples.empty(), Errc::PreconditionFailed, "empty chain");
  for (const FinTuple& t : C.tuples) {
    S.check_elems(t);
    if (C.acl_closed)
      require(S.acl_closed(as_set(t)), Errc::NotAclClosed, "chain link not algebraically closed");
  }
}

inline FinSet link_set(const Chain& C, std::size_t i) { return as_set(C.tuples[i]); }

/// Composition outer(inner(.)) as a partial map over `domain`, extending both
/// factors as needed.
inline PartialAut compose_partial(OligoStructure& S, PartialAut outer, PartialAut inner,
                                  const FinSet& domain, int budget = 20000) {
  PartialAut out;
  for (Elem x : domain) {
    inner = extend_automorphism(S, inner, x, budget);
    Elem y = *inner.apply(x);
    outer = extend_automorphism(S, outer, y, budget);
    if (!out.in_domain(x)) out.set(x, *outer.apply(y));
  }
  return out;
}

// --- membership witnesses ----------------------------------------------------

struct ChainWitness {
  enum class Status { Found, None, Inconclusive };
  Status status = Status::None;
  std::vector<FinTuple> links;  // the witnessing chain when found
  long nodes_visited = 0;
};

namespace detail_chains {

struct WitnessSearch {
  OligoStructure& S;
  const Chain& C;
  std::vector<FinTuple> links;
  long budget;
  long nodes = 0;
  bool exceeded = false;

  bool consistent_prefix(std::size_t i, std::size_t j) {
    // joint type of (c_{i-1}, c_i[0..j]) must match the candidate prefix
    FinTuple want = C.tuples[i - 1];
    want.insert(want.end(), C.tuples[i].begin(), C.tuples[i].begin() + j + 1);
    FinTuple got = links[i - 1];
    got.insert(got.end(), links[i].begin(), links[i].end());
    return S.orbit_eq(want, got);
  }

  bool search_link(std::size_t i, std::size_t j) {
    if (exceeded) return false;
    const std::size_t k = C.tuples.size() - 1;
    if (j == C.tuples[i].size()) {
      if (i + 1 == k) {
        // final pair against the fixed endpoint
        FinTuple want = C.tuples[k - 1];
        want.insert(want.end(), C.tuples[k].begin(), C.tuples[k].end());
        FinTuple got = links[k - 1];
        got.insert(got.end(), links[k].begin(), links[k].end());
        return S.orbit_eq(want, got);
      }
      links[i + 1].clear();
      return search_link(i + 1, 0);
    }
    // reuse of elements already placed in this link is legal (tuples may repeat)
    for (Elem cand = 0; cand < S.universe_size(); ++cand) {
      if (++nodes > budget) {
        exceeded = true;
        return false;
      }
      links[i].push_back(cand);
      if (consistent_prefix(i, j) && search_link(i, j + 1)) return true;
      links[i].pop_back();
      if (exceeded) return false;
    }
    return false;
  }
};

}  // namespace detail_chains

/// Searches for a chain witnessing membership of g in the stabilizer product
/// of C: same start, endpoint g(c_k), and linkwise orbit-equivalent pairs.
/// "None" is exhaustive over the current truncation.
inline ChainWitness chain_membership_witness(OligoStructure& S, const Chain& C,
                                             const PartialAut& g, long budget = 200000) {
  check_chain(S, C);
  const std::size_t k = C.tuples.size() - 1;
  for (Elem e : C.tuples[k])
    require(g.in_domain(e), Errc::DomainMismatch, "g undefined on the last link");
  FinTuple last = g.apply_tuple(C.tuples[k]);

  ChainWitness out;
  if (k == 0) {
    if (last == C.tuples[0]) {
      out.status = ChainWitness::Status::Found;
      out.links = {C.tuples[0]};
    }
    return out;
  }
  detail_chains::WitnessSearch se{S, C, {}, budget, 0, false};
  se.links.resize(k + 1);
  se.links[0] = C.tuples[0];
  se.links[k] = last;
  bool found = (k == 1) ? [&] {
    FinTuple want = C.tuples[0];
    want.insert(want.end(), C.tuples[1].begin(), C.tuples[1].end());
    FinTuple got = se.links[0];
    got.insert(got.end(), last.begin(), last.end());
    return S.orbit_eq(want, got);
  }()
                        : se.search_link(1, 0);
  out.nodes_visited = se.nodes;
  if (found) {
    out.status = ChainWitness::Status::Found;
    out.links = se.links;
  } else {
    out.status = se.exceeded ? ChainWitness::Status::Inconclusive : ChainWitness::Status::None;
  }
  return out;
}

// --- chain rewriting ---------------------------------------------------------

/// g in G_A with g(c_0) = c'_0 carrying the stabilizer product of C onto that
/// of C', for chains sharing the last link and linkwise A-conjugate pairs.
inline PartialAut change_chain(OligoStructure& S, const Chain& C, const Chain& Cp,
                               const FinSet& A, int budget = 20000) {
  check_chain(S, C);
  check_chain(S, Cp);
  require(C.tuples.size() == Cp.tuples.size(), Errc::PreconditionFailed, "length mismatch");
  const std::size_t k = C.tuples.size() - 1;
  require(C.tuples[k] == Cp.tuples[k], Errc::PreconditionFailed, "last links must agree");
  FinTuple actx(A.begin(), A.end());
  for (std::size_t i = 0; i < k; ++i) {
    FinTuple u = C.tuples[i];
    u.insert(u.end(), C.tuples[i + 1].begin(), C.tuples[i + 1].end());
    FinTuple v = Cp.tuples[i];
    v.insert(v.end(), Cp.tuples[i + 1].begin(), Cp.tuples[i + 1].end());
    require(S.orbit_eq_over(u, v, actx), Errc::PreconditionFailed,
            "consecutive pairs not A-conjugate");
  }
  if (k == 0) return PartialAut::identity_on(set_union(A, as_set(C.tuples[0])));

  // induction on the tail
  Chain tail{std::vector<FinTuple>(C.tuples.begin() + 1, C.tuples.end()), C.acl_closed};
  Chain tailp{std::vector<FinTuple>(Cp.tuples.begin() + 1, Cp.tuples.end()), Cp.acl_closed};
  PartialAut h = change_chain(S, tail, tailp, A, budget);

  // h' fixes A and c_1 pointwise and sends c_0 to the h-preimage of c'_0
  PartialAut hinv = h.inverse();
  FinTuple t0;
  for (Elem e : Cp.tuples[0]) {
    hinv = extend_automorphism(S, hinv, e, budget);
    t0.push_back(*hinv.apply(e));
  }
  PartialAut hp = PartialAut::identity_on(set_union(A, as_set(C.tuples[1])));
  for (std::size_t i = 0; i < t0.size(); ++i) {
    if (hp.in_domain(C.tuples[0][i])) {
      require(*hp.apply(C.tuples[0][i]) == t0[i], Errc::PreconditionFailed,
              "conflicting transport of the head link");
      continue;
    }
    hp.set(C.tuples[0][i], t0[i]);
  }
  require(is_partial_auto(S, hp), Errc::PreconditionFailed, "head transport is not a partial map");

  FinSet domain = set_union(A, as_set(C.tuples[0]));
  for (const FinTuple& t : C.tuples) domain = set_union(domain, as_set(t));
  PartialAut g = compose_partial(S, h, hp, domain, budget);
  // exact postconditions
  for (Elem a : A) require(g.apply(a) == a, Errc::PreconditionFailed, "g moves the base");
  for (std::size_t i = 0; i < C.tuples[0].size(); ++i)
    require(*g.apply(C.tuples[0][i]) == Cp.tuples[0][i], Errc::PreconditionFailed,
            "g misses the head link");
  return g;
}

/// Neumann-relocated copy of D over C whose trace on A is C n D n A, together
/// with the witnessing stabilizer element.
inline std::pair<FinSet, PartialAut> intersect_chains(OligoStructure& S, const FinSet& A,
                                                      const FinSet& C, const FinSet& D,
                                                      int budget = 20000) {
  require(S.acl_closed(A) && S.acl_closed(C) && S.acl_closed(D), Errc::NotAclClosed,
          "intersect_chains needs algebraically closed inputs");
  PartialAut g = neumann_witness(S, C, D, A, budget);
  FinTuple dt(D.begin(), D.end());
  FinSet E = as_set(g.apply_tuple(dt));
  require(set_intersect(E, A) == set_intersect(set_intersect(C, D), A), Errc::PreconditionFailed,
          "relocated intersection wrong (bug)");
  return {E, g};
}

// --- skipping terms ----------------------------------------------------------

struct SkipCase {
  bool case_one = true;
  FinSet A;                                // case (I)
  std::function<bool(Elem)> delta_oracle;  // case (II)
};

/// Halves a chain of even length: returns the even-indexed subchain of a
/// rewritten copy plus the carrying group element. Case (I) keeps every
/// neighbouring intersection equal to A and g fixes A; case (II) keeps the
/// intersections inside the invariant set.
inline std::pair<Chain, PartialAut> skip_terms(OligoStructure& S, const Chain& C,
                                               const SkipCase& sc, int budget = 20000) {
  check_chain(S, C);
  require(C.tuples.size() % 2 == 1 && C.tuples.size() >= 3, Errc::PreconditionFailed,
          "skip_terms needs even length");
  const std::size_t k2 = C.tuples.size() - 1;  // = 2k
  const std::size_t k = k2 / 2;

  FinSet A;  // case (I) base, or the closure of the pair intersections in (II)
  if (sc.case_one) {
    A = sc.A;
    for (std::size_t i = 0; i + 2 <= k2; i += 2) {
      FinSet triple = set_intersect(set_intersect(link_set(C, i), link_set(C, i + 1)),
                                    link_set(C, i + 2));
      require(triple == A, Errc::PreconditionFailed, "triple intersections must equal A");
    }
  } else {
    FinSet gather;
    for (std::size_t i = 0; i + 1 <= k2; i += 2)
      gather = set_union(gather, set_intersect(link_set(C, i), link_set(C, i + 1)));
    A = S.acl(gather);
    for (Elem e : A)
      require(sc.delta_oracle(e), Errc::PreconditionFailed,
              "pair intersections must lie in the invariant set");
  }

  // rebuild the chain backwards, disjoining every second link over A
  std::vector<FinTuple> rebuilt(k2 + 1);
  rebuilt[k2] = C.tuples[k2];
  FinTuple actx(A.begin(), A.end());
  for (std::size_t l = k; l >= 1; --l) {
    std::size_t i = 2 * l;
    // transport (c_{i-1}, c_{i-2}) along c_i -> rebuilt_i over A
    PartialAut m = PartialAut::identity_on(A);
    for (std::size_t t = 0; t < C.tuples[i].size(); ++t) {
      if (m.in_domain(C.tuples[i][t])) {
        require(*m.apply(C.tuples[i][t]) == rebuilt[i][t], Errc::PreconditionFailed,
                "link transport conflicts with the base");
        continue;
      }
      m.set(C.tuples[i][t], rebuilt[i][t]);
    }
    require(is_partial_auto(S, m), Errc::PreconditionFailed, "link transport failed");
    for (Elem e : C.tuples[i - 1]) m = extend_automorphism(S, m, e, budget);
    rebuilt[i - 1] = m.apply_tuple(C.tuples[i - 1]);
    for (Elem e : C.tuples[i - 2]) m = extend_automorphism(S, m, e, budget);
    FinTuple middle = m.apply_tuple(C.tuples[i - 2]);

    // Neumann perturbation: move the new even link off rebuilt_i (except A)
    FinSet fixed = set_union(A, as_set(rebuilt[i - 1]));
    PartialAut p = PartialAut::identity_on(fixed);
    FinSet avoid_set = as_set(rebuilt[i]);
    auto allow = [&](Elem cand) {
      return !set_contains(avoid_set, cand) || set_contains(A, cand);
    };
    Elem fresh = Elem(S.universe_size());
    S.grow();
    for (Elem e : middle) {
      if (p.in_domain(e)) continue;
      p = extend_automorphism(S, p, e, budget, allow, fresh);
    }
    rebuilt[i - 2] = p.apply_tuple(middle);
    // fixed points of p inside the avoided region would violate the target
    FinSet overlap = set_intersect(as_set(rebuilt[i - 2]), avoid_set);
    require(subset_of(overlap, A), Errc::PreconditionFailed, "perturbation left an overlap");
  }

  Chain rewritten{rebuilt, C.acl_closed};
  PartialAut g = change_chain(S, C, rewritten, sc.case_one ? A : FinSet{}, budget);
  Chain D;
  D.acl_closed = C.acl_closed;
  for (std::size_t i = 0; i <= k2; i += 2) D.tuples.push_back(rebuilt[i]);
  if (sc.case_one) {
    for (std::size_t i = 0; i + 1 < D.tuples.size(); ++i)
      require(set_intersect(link_set(D, i), link_set(D, i + 1)) == A, Errc::PreconditionFailed,
              "subchain intersections must equal A");
  }
  return {D, g};
}

// --- independent chains and reachability -------------------------------------

/// Rewrites C into a linkwise A-conjugate chain, sharing the last link, whose
/// middle links are independent from their successors (so the chain is
/// independent in the narrow sense), found fresh-first and verified by rel.
inline Chain independent_chain_from(OligoStructure& S, const Chain& C, const FinSet& A,
                                    const IndepRelation& rel, int budget = 20000) {
  check_chain(S, C);
  const std::size_t k = C.tuples.size() - 1;
  Chain out;
  out.acl_closed = C.acl_closed;
  out.tuples.resize(k + 1);
  out.tuples[k] = C.tuples[k];
  if (k == 0) return out;
  FinTuple actx(A.begin(), A.end());
  for (std::size_t ii = k; ii-- > 0;) {
    // transport c_ii along c_{ii+1} -> out_{ii+1} over A, into fresh territory
    PartialAut m = PartialAut::identity_on(A);
    for (std::size_t t = 0; t < C.tuples[ii + 1].size(); ++t) {
      if (m.in_domain(C.tuples[ii + 1][t])) {
        require(*m.apply(C.tuples[ii + 1][t]) == out.tuples[ii + 1][t], Errc::PreconditionFailed,
                "link transport conflicts with the base");
        continue;
      }
      m.set(C.tuples[ii + 1][t], out.tuples[ii + 1][t]);
    }
    require(is_partial_auto(S, m), Errc::PreconditionFailed, "link transport failed");
    Elem fresh = Elem(S.universe_size());
    S.grow();
    for (Elem e : C.tuples[ii]) {
      if (m.in_domain(e)) continue;
      m = extend_automorphism(S, m, e, budget, nullptr, fresh);
    }
    out.tuples[ii] = m.apply_tuple(C.tuples[ii]);
    // tail = everything after the immediate successor
    FinSet tail;
    for (std::size_t j = ii + 2; j <= k; ++j) tail = set_union(tail, as_set(out.tuples[j]));
    if (!tail.empty() &&
        !rel(S, as_set(out.tuples[ii]), tail, as_set(out.tuples[ii + 1])))
      fail(Errc::BudgetExceeded, "fresh transport failed the independence check");
  }
  // full narrow-pattern verification
  for (std::size_t i = 1; i < k; ++i) {
    FinSet before, after;
    for (std::size_t j = 0; j < i; ++j) before = set_union(before, as_set(out.tuples[j]));
    for (std::size_t j = i + 1; j <= k; ++j) after = set_union(after, as_set(out.tuples[j]));
    require(rel(S, before, after, as_set(out.tuples[i])), Errc::PreconditionFailed,
            "output chain failed the independence pattern (bug)");
  }
  return out;
}

struct ReachabilityReport {
  std::size_t samples = 0;
  std::size_t witnessed = 0;
  std::size_t inconclusive = 0;
  std::size_t converse_checked = 0;
  bool converse_ok = true;
  bool ok() const { return witnessed == samples && converse_ok; }
};

/// Samples stabilizer elements of A and confirms each one admits a chain
/// membership witness for C; also samples explicit members of the chain
/// stabilizer and confirms they fix A pointwise.
inline ReachabilityReport reachability_check(OligoStructure& S, const FinSet& A, const Chain& C,
                                             std::size_t samples, long budget,
                                             std::uint64_t seed) {
  check_chain(S, C);
  for (std::size_t i = 0; i + 1 < C.tuples.size(); ++i)
    require(set_intersect(link_set(C, i), link_set(C, i + 1)) == A, Errc::PreconditionFailed,
            "consecutive intersections must equal A");
  for (const FinTuple& t : C.tuples)
    require(subset_of(A, as_set(t)), Errc::PreconditionFailed, "base must lie in every link");

  ReachabilityReport rep;
  rep.samples = samples;
  SplitMix64 rng(seed);
  const std::size_t k = C.tuples.size() - 1;
  for (std::size_t s = 0; s < samples; ++s) {
    SplitMix64 sub = rng.fork(s);
    PartialAut g = PartialAut::identity_on(A);
    for (Elem e : C.tuples[k]) g = extend_automorphism_random(S, g, e, sub);
    ChainWitness w = chain_membership_witness(S, C, g, budget);
    if (w.status == ChainWitness::Status::Found)
      ++rep.witnessed;
    else if (w.status == ChainWitness::Status::Inconclusive)
      ++rep.inconclusive;
    // converse: explicit members of the chain stabilizer fix A pointwise
    FinSet dom = A;
    for (const FinTuple& t : C.tuples) dom = set_union(dom, as_set(t));
    std::optional<PartialAut> member;
    for (std::size_t i = 0; i <= k; ++i) {
      PartialAut gi = PartialAut::identity_on(link_set(C, i));
      for (Elem e : dom) gi = extend_automorphism_random(S, gi, e, sub);
      member = member ? compose_partial(S, *member, gi, dom) : gi;
    }
    ++rep.converse_checked;
    rep.converse_ok &= member->fixes(A);
  }
  return rep;
}

}  // namespace homog
