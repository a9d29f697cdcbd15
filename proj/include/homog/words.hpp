#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "homog/error.hpp"
#include "homog/oligo.hpp"

namespace homog {

/// An injective self-map of an oligomorphic structure usable as a word
/// coefficient: either a finite partial map extended on demand by
/// back-and-forth, a total linear map (vector kinds), or a within-copy
/// pattern applied to every copy (copies_kn).
class OligoMap {
 public:
  static OligoMap identity() {
    OligoMap m;
    m.kind_ = Kind::Identity;
    return m;
  }
  static OligoMap from_partial(PartialAut seed) {
    OligoMap m;
    m.kind_ = Kind::Partial;
    m.partial_ = std::make_shared<PartialAut>(std::move(seed));
    return m;
  }
  /// basis_images[i] = image of e_{i+1}; must be linearly independent.
  static OligoMap linear(const OligoStructure& S, std::vector<Elem> basis_images) {
    OligoMap m;
    m.kind_ = Kind::Linear;
    m.basis_images_ = std::move(basis_images);
    FinSet span = S.vec_span(as_set(FinTuple(m.basis_images_.begin(), m.basis_images_.end())));
    require(span.size() == std::size_t(ipow(S.q(), int(m.basis_images_.size()))),
            Errc::PreconditionFailed, "linear map images must be independent");
    return m;
  }
  /// tau = permutation of {0..n-1} applied inside every copy.
  static OligoMap copies_pattern(std::vector<int> tau) {
    OligoMap m;
    m.kind_ = Kind::CopiesPattern;
    m.tau_ = std::move(tau);
    return m;
  }

  Elem eval(OligoStructure& S, Elem x) const {
    switch (kind_) {
      case Kind::Identity: return x;
      case Kind::Linear: {
        Elem out = 0;
        for (int i = 0; i < S.dim(); ++i) {
          int c = S.vec_coord(x, i);
          if (c == 0) continue;
          Elem img = std::size_t(i) < basis_images_.size() ? basis_images_[i] : S.vec_basis(i);
          out = S.vec_add(out, S.vec_scale(c, img));
        }
        return out;
      }
      case Kind::CopiesPattern: {
        int pos = int(x) % S.n();
        return Elem(S.copy_of(x) * S.n() + tau_.at(pos));
      }
      case Kind::Partial: {
        if (auto v = partial_->apply(x)) return *v;
        *partial_ = extend_automorphism(S, *partial_, x);
        return *partial_->apply(x);
      }
    }
    fail(Errc::PreconditionFailed, "unknown map kind");
  }

  std::string describe() const {
    switch (kind_) {
      case Kind::Identity: return "id";
      case Kind::Linear: return "linear";
      case Kind::CopiesPattern: return "copies-pattern";
      case Kind::Partial: return "partial";
    }
    return "?";
  }

 private:
  static long ipow(int b, int e) {
    long r = 1;
    while (e-- > 0) r *= b;
    return r;
  }
  enum class Kind { Identity, Partial, Linear, CopiesPattern };
  Kind kind_ = Kind::Identity;
  std::shared_ptr<PartialAut> partial_;
  std::vector<Elem> basis_images_;
  std::vector<int> tau_;
};

/// lambda_n s ... s lambda_0 != eta_m s ... s eta_0, one free variable s.
/// Coefficient lists are stored lowest index first (element 0 applies first).
struct InequalityWord {
  std::vector<OligoMap> left;   // lambda_0 .. lambda_n
  std::vector<OligoMap> right;  // eta_0 .. eta_m
};

enum class WordType { TypeI, TypeII };

inline WordType classify_inequality(const InequalityWord& w) {
  require(!w.left.empty() && !w.right.empty(), Errc::MalformedWord, "empty coefficient list");
  require(w.left.size() >= w.right.size(), Errc::MalformedWord, "need n >= m");
  return w.left.size() == w.right.size() ? WordType::TypeI : WordType::TypeII;
}

/// Evaluates one side of a word at x, with s given as a callback.
inline Elem eval_word_side(OligoStructure& S, const std::vector<OligoMap>& coefs,
                           const std::function<Elem(Elem)>& s, Elem x) {
  Elem v = coefs[0].eval(S, x);
  for (std::size_t i = 1; i < coefs.size(); ++i) v = coefs[i].eval(S, s(v));
  return v;
}

// --- free sequences ---------------------------------------------------------

struct PairMap {
  OligoMap first, second;
};

/// A free sequence under construction: pairs a_i with their coefficient
/// pairs f_i, the anchor tuples, and the accumulated transport map.
struct FreeSeq {
  FinTuple b, b_prime;
  std::vector<std::pair<Elem, Elem>> a;
  std::vector<PairMap> f;
  PartialAut delta;  // b -> b_prime and f_i a_i -> a_{i+1}

  FinSet closure_generators(std::size_t upto) const {
    FinTuple gens(b.begin(), b.end());
    for (std::size_t i = 0; i < upto && i < fa_cache.size(); ++i) {
      gens.push_back(fa_cache[i].first);
      gens.push_back(fa_cache[i].second);
    }
    return as_set(gens);
  }
  std::vector<std::pair<Elem, Elem>> fa_cache;  // f_i a_i values
};

/// Verifies both freeness conditions of the current state exactly.
inline bool verify_free(OligoStructure& S, FreeSeq& st) {
  if (!S.orbit_eq(st.b, st.b_prime)) return false;
  st.fa_cache.clear();
  for (std::size_t i = 0; i < st.a.size(); ++i) {
    st.fa_cache.emplace_back(st.f[i].first.eval(S, st.a[i].first),
                             st.f[i].second.eval(S, st.a[i].second));
  }
  for (std::size_t i = 0; i < st.a.size(); ++i) {
    FinSet gens = st.closure_generators(i);
    if (S.acl_contains(gens, st.fa_cache[i].first)) return false;
    if (S.acl_contains(gens, st.fa_cache[i].second)) return false;
  }
  // transport map: b -> b', f_i a_i -> a_{i+1}
  PartialAut delta;
  for (std::size_t i = 0; i < st.b.size(); ++i) {
    if (!delta.in_domain(st.b[i])) delta.set(st.b[i], st.b_prime[i]);
  }
  for (std::size_t i = 0; i + 1 < st.a.size(); ++i) {
    if (!delta.in_domain(st.fa_cache[i].first)) delta.set(st.fa_cache[i].first, st.a[i + 1].first);
    if (!delta.in_domain(st.fa_cache[i].second))
      delta.set(st.fa_cache[i].second, st.a[i + 1].second);
  }
  if (!is_partial_auto(S, delta)) return false;
  st.delta = delta;
  return true;
}

/// One construction step: appends a_{n+1} for the new coefficient pair,
/// transporting the latest value and then perturbing it off the finite
/// forbidden set so the extended sequence stays free.
inline void free_sequence_step(OligoStructure& S, FreeSeq& st, const PairMap& f_next,
                               int budget = 20000) {
  require(!st.a.empty(), Errc::PreconditionFailed, "free_sequence_step needs a seeded sequence");
  require(verify_free(S, st), Errc::NotFree, "input sequence is not free");

  const std::size_t n = st.a.size() - 1;
  auto fa_n = st.fa_cache[n];

  // context fixed by the perturbation: generators of acl(a_n ... a_1 b')
  // (fixing the generators pointwise fixes their closure)
  FinTuple ctx(st.b_prime.begin(), st.b_prime.end());
  for (std::size_t i = 1; i <= n; ++i) {
    ctx.push_back(st.a[i].first);
    ctx.push_back(st.a[i].second);
  }

  // transport f_n a_n across delta (extending it as needed)
  PartialAut delta = st.delta;
  delta = extend_automorphism(S, delta, fa_n.first, budget);
  delta = extend_automorphism(S, delta, fa_n.second, budget);
  std::pair<Elem, Elem> primed{*delta.apply(fa_n.first), *delta.apply(fa_n.second)};

  // forbidden set: images under f_next must leave the closure of everything built
  FinSet forbidden = st.closure_generators(st.a.size());
  OligoStructure* Sp = &S;
  auto avoid_first = [&, Sp](Elem cand) {
    return !Sp->acl_contains(forbidden, f_next.first.eval(*Sp, cand));
  };
  auto avoid_second = [&, Sp](Elem cand) {
    return !Sp->acl_contains(forbidden, f_next.second.eval(*Sp, cand));
  };

  PartialAut move = PartialAut::identity_on(as_set(ctx));
  bool vec_kind = S.kind() == OligoKind::VecFq || S.kind() == OligoKind::AffineFq;
  Elem fresh;
  if (vec_kind || S.universe_size() < 4096) {
    // vector kinds must add a dimension: the working span may already
    // saturate the truncation, leaving no independent candidates
    fresh = Elem(S.universe_size());
    S.grow();
  } else {
    fresh = Elem(S.universe_size() / 2);
  }
  if (primed.second == primed.first) {
    // a diagonal pair perturbs to a diagonal pair
    auto both = [&](Elem cand) { return avoid_first(cand) && avoid_second(cand); };
    move = extend_automorphism(S, move, primed.first, budget, both, fresh);
  } else {
    move = extend_automorphism(S, move, primed.first, budget, avoid_first, fresh);
    move = extend_automorphism(S, move, primed.second, budget, avoid_second, fresh);
  }
  std::pair<Elem, Elem> a_next{*move.apply(primed.first), *move.apply(primed.second)};

  st.a.push_back(a_next);
  st.f.push_back(f_next);
  require(verify_free(S, st), Errc::NotFree, "extension failed to stay free (bug)");
}

// --- type II solving and the centre witness ---------------------------------

/// Solution of a type (II) inequality inside the given pointwise constraint:
/// delta extends nbhd and satisfies the inequality at a constructed witness
/// point, by building a free sequence for the word's coefficient pairs.
inline PartialAut solve_type_II(OligoStructure& S, const InequalityWord& w,
                                const PartialAut& nbhd, int budget = 20000) {
  require(classify_inequality(w) == WordType::TypeII, Errc::PreconditionFailed,
          "solve_type_II needs a type (II) word");
  require(is_partial_auto(S, nbhd), Errc::PreconditionFailed, "nbhd is not a partial map");
  const std::size_t n = w.left.size() - 1, m = w.right.size() - 1;

  FreeSeq st;
  st.b = nbhd.sources();
  st.b_prime = nbhd.images();

  std::vector<PairMap> f;
  for (std::size_t i = 0; i <= n; ++i) {
    PairMap fm{w.left[i], i <= m ? w.right[i] : OligoMap::identity()};
    f.push_back(fm);
  }

  // seed element: its images under f_0 must avoid acl(b); scan a bounded
  // low window first, then fresh elements after growing
  FinSet base_cl = as_set(st.b);
  std::optional<Elem> e0;
  auto scan = [&](Elem from, Elem to) {
    for (Elem cand = from; cand < to && !e0; ++cand) {
      if (S.acl_contains(base_cl, f[0].first.eval(S, cand))) continue;
      if (S.acl_contains(base_cl, f[0].second.eval(S, cand))) continue;
      e0 = cand;
    }
  };
  scan(0, Elem(std::min<std::size_t>(S.universe_size(), 512)));
  for (int round = 0; round < 3 && !e0; ++round) {
    Elem old_end = Elem(S.universe_size());
    S.grow();
    scan(old_end, Elem(std::min<std::size_t>(S.universe_size(), old_end + 512)));
  }
  require(e0.has_value(), Errc::BudgetExceeded, "no free seed element found");
  st.a.emplace_back(*e0, *e0);
  st.f.push_back(f[0]);

  for (std::size_t i = 1; i <= n; ++i) free_sequence_step(S, st, f[i], budget);

  // read off delta and verify the inequality at the witness point e0
  PartialAut delta = st.delta;
  auto s_fn = [&](Elem x) {
    auto v = delta.apply(x);
    require(v.has_value(), Errc::PreconditionFailed, "witness evaluation left delta's domain");
    return *v;
  };
  Elem lhs = eval_word_side(S, w.left, s_fn, *e0);
  Elem rhs = eval_word_side(S, w.right, s_fn, *e0);
  require(lhs != rhs, Errc::PreconditionFailed, "constructed delta fails the inequality (bug)");
  for (const auto& [src, dst] : nbhd.pairs)
    require(delta.apply(src) == dst, Errc::PreconditionFailed, "delta disagrees with nbhd (bug)");
  return delta;
}

/// Small generating set of the automorphism group acting on the truncation,
/// for exhaustive finite-scale commutation checks.
inline std::vector<OligoMap> automorphism_generators(OligoStructure& S) {
  std::vector<OligoMap> gens;
  switch (S.kind()) {
    case OligoKind::VecFq:
    case OligoKind::AffineFq: {
      int d = S.dim();
      // transvection e1 -> e1+e2, basis rotation, and a scalar for q > 2
      std::vector<Elem> tv;
      for (int i = 0; i < d; ++i) tv.push_back(S.vec_basis(i));
      tv[0] = S.vec_add(S.vec_basis(0), S.vec_basis(1));
      gens.push_back(OligoMap::linear(S, tv));
      std::vector<Elem> rot;
      for (int i = 0; i < d; ++i) rot.push_back(S.vec_basis((i + 1) % d));
      gens.push_back(OligoMap::linear(S, rot));
      if (S.q() > 2) {
        std::vector<Elem> sc;
        for (int i = 0; i < d; ++i) sc.push_back(i == 0 ? S.vec_scale(2, S.vec_basis(0))
                                                        : S.vec_basis(i));
        gens.push_back(OligoMap::linear(S, sc));
      }
      return gens;
    }
    case OligoKind::CopiesKn: {
      int n = S.n();
      // within-copy adjacent transpositions in copy 0, plus a copy swap
      for (int i = 0; i + 1 < n; ++i) {
        PartialAut t;
        for (Elem v = 0; v < S.universe_size(); ++v) {
          Elem img = v;
          if (S.copy_of(v) == 0) {
            int pos = int(v) % n;
            if (pos == i) img = v + 1;
            else if (pos == i + 1) img = v - 1;
          }
          t.set(v, img);
        }
        gens.push_back(OligoMap::from_partial(t));
      }
      PartialAut swap01;
      for (Elem v = 0; v < S.universe_size(); ++v) {
        Elem img = v;
        if (S.copy_of(v) == 0) img = v + Elem(n);
        else if (S.copy_of(v) == 1) img = v - Elem(n);
        swap01.set(v, img);
      }
      gens.push_back(OligoMap::from_partial(swap01));
      return gens;
    }
    case OligoKind::PureSet: {
      PartialAut t;
      t.set(0, 1);
      t.set(1, 0);
      for (Elem v = 2; v < S.universe_size(); ++v) t.set(v, v);
      gens.push_back(OligoMap::from_partial(t));
      return gens;
    }
    default: return gens;
  }
}

/// gamma commutes with every generator on the whole truncation.
inline bool commutes_with_generators(OligoStructure& S, const OligoMap& gamma) {
  std::vector<OligoMap> gens = automorphism_generators(S);
  std::size_t n = S.universe_size();
  for (const OligoMap& g : gens)
    for (Elem x = 0; x < n; ++x)
      if (gamma.eval(S, g.eval(S, x)) != g.eval(S, gamma.eval(S, x))) return false;
  return true;
}

/// Searches the shipped candidate families for nontrivial central elements of
/// the truncation's automorphism group.
inline std::vector<OligoMap> centre_search(OligoStructure& S) {
  std::vector<OligoMap> found;
  switch (S.kind()) {
    case OligoKind::VecFq: {
      int d = S.dim();
      for (int c = 2; c < S.q(); ++c) {
        std::vector<Elem> imgs;
        for (int i = 0; i < d; ++i) imgs.push_back(S.vec_scale(c, S.vec_basis(i)));
        OligoMap cand = OligoMap::linear(S, imgs);
        if (commutes_with_generators(S, cand)) found.push_back(cand);
      }
      return found;
    }
    case OligoKind::CopiesKn: {
      int n = S.n();
      // all within-copy patterns, applied uniformly to every copy
      std::vector<int> tau(n);
      for (int i = 0; i < n; ++i) tau[i] = i;
      while (std::next_permutation(tau.begin(), tau.end())) {
        OligoMap cand = OligoMap::copies_pattern(tau);
        if (commutes_with_generators(S, cand)) found.push_back(cand);
      }
      return found;
    }
    default: return found;
  }
}

struct CentreWitnessReport {
  bool central = false;
  std::size_t type1_verified = 0;
  std::size_t type2_solved = 0;
  PartialAut delta;
};

/// Finite-scale witness that the identity and a central gamma cannot be
/// separated: gamma inherits every type (I) inequality the identity
/// satisfies, and delta matches gamma on `base` while solving all the
/// type (II) words.
inline CentreWitnessReport centre_witness(OligoStructure& S, const OligoMap& gamma,
                                          const std::vector<InequalityWord>& type1_words,
                                          const std::vector<InequalityWord>& type2_words,
                                          const FinSet& base, int budget = 20000) {
  require(commutes_with_generators(S, gamma), Errc::NotCentral,
          "gamma does not commute with the generators");
  CentreWitnessReport rep;
  rep.central = true;

  auto with_id = [&](Elem x) { return x; };
  for (const InequalityWord& w : type1_words) {
    require(classify_inequality(w) == WordType::TypeI, Errc::PreconditionFailed,
            "type (I) word expected");
    // witness point for the identity
    std::optional<Elem> x_star;
    for (Elem x = 0; x < S.universe_size() && !x_star; ++x)
      if (eval_word_side(S, w.left, with_id, x) != eval_word_side(S, w.right, with_id, x))
        x_star = x;
    require(x_star.has_value(), Errc::PreconditionFailed,
            "identity does not satisfy a presented type (I) word");
    auto with_gamma = [&](Elem x) { return gamma.eval(S, x); };
    Elem lg = eval_word_side(S, w.left, with_gamma, *x_star);
    Elem rg = eval_word_side(S, w.right, with_gamma, *x_star);
    // the centrality identity: inserting gamma equals gamma^n after the plain word
    Elem lid = eval_word_side(S, w.left, with_id, *x_star);
    Elem rid = eval_word_side(S, w.right, with_id, *x_star);
    std::size_t puffs = w.left.size() - 1;
    for (std::size_t i = 0; i < puffs; ++i) {
      lid = gamma.eval(S, lid);
      rid = gamma.eval(S, rid);
    }
    require(lg == lid && rg == rid, Errc::NotCentral, "centrality identity failed");
    require(lg != rg, Errc::PreconditionFailed, "gamma lost a type (I) inequality (bug)");
    ++rep.type1_verified;
  }

  // accumulate one delta across all type (II) words
  PartialAut delta;
  for (Elem b : base) delta.set(b, gamma.eval(S, b));
  for (const InequalityWord& w : type2_words) {
    delta = solve_type_II(S, w, delta, budget);
    ++rep.type2_solved;
  }
  for (Elem b : base)
    require(delta.apply(b) == gamma.eval(S, b), Errc::PreconditionFailed,
            "delta disagrees with gamma on the base (bug)");
  rep.delta = delta;
  return rep;
}

}  // namespace homog
