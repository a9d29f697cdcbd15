#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "homog/error.hpp"
#include "homog/generator.hpp"
#include "homog/prng.hpp"

namespace homog {

namespace detail {

/// Explored part of a self-embedding: a coherent partial isometry of the
/// generator prefix, extended point by point. `eval` may be called in any
/// order (the construction recursions are enumeration-order free); sequential
/// `advance` walks the prefix enumeration.
struct EmbImpl {
  GenPtr gen;
  std::unordered_map<PointId, PointId> img;
  std::vector<std::pair<PointId, PointId>> order;  // exploration order
  std::size_t next_prefix = 0;
  std::size_t advances = 0;

  explicit EmbImpl(GenPtr g) : gen(std::move(g)) {}
  virtual ~EmbImpl() = default;
  virtual std::string rule() const = 0;
  virtual PointId map_new(PointId p) = 0;  // compute image of an unexplored point

  virtual std::optional<PointId> image_of(PointId p) const {
    auto it = img.find(p);
    if (it == img.end()) return std::nullopt;
    return it->second;
  }

  PointId eval(PointId p) {
    require(p < gen->size(), Errc::UnknownPoint, "eval: unknown point " + std::to_string(p));
    if (auto i = image_of(p)) return *i;
    PointId v = map_new(p);
    img.emplace(p, v);
    order.emplace_back(p, v);
    return v;
  }

  void advance() {
    ++advances;
    if (next_prefix >= gen->size()) return;  // prefix exhausted (images keep it growing)
    PointId p = PointId(next_prefix++);
    eval(p);
  }

  // Forced distances of a new domain point relative to everything explored.
  ExtensionRequest forced_request(PointId p) const {
    ExtensionRequest req;
    for (const auto& [x, y] : order) {
      req.base.push_back(y);
      req.f.push_back(gen->distance(p, x));
    }
    return req;
  }
};

struct IdentityImpl final : EmbImpl {
  using EmbImpl::EmbImpl;
  std::string rule() const override { return "identity"; }
  PointId map_new(PointId p) override { return p; }
  std::optional<PointId> image_of(PointId p) const override {
    return p < gen->size() ? std::optional<PointId>(p) : std::nullopt;
  }
};

/// Generic back-and-forth: honors initial pins, then images are either the
/// lowest existing match or (seeded mode) a random choice among matches in a
/// bounded probe window plus the fresh option.
struct GenericImpl final : EmbImpl {
  bool seeded;
  SplitMix64 rng;
  std::size_t probe_window;

  GenericImpl(GenPtr g, std::vector<std::pair<PointId, PointId>> pins, bool seeded_mode,
              std::uint64_t seed, std::size_t window)
      : EmbImpl(std::move(g)), seeded(seeded_mode), rng(seed), probe_window(window) {
    for (const auto& [x, y] : pins) {
      require(x < gen->size() && y < gen->size(), Errc::UnknownPoint, "pin outside prefix");
      require(!img.count(x), Errc::PreconditionFailed, "duplicate pin");
      img.emplace(x, y);
      order.emplace_back(x, y);
    }
    for (std::size_t i = 0; i < order.size(); ++i)
      for (std::size_t j = i + 1; j < order.size(); ++j) {
        require(order[i].second != order[j].second, Errc::PreconditionFailed, "pins not injective");
        require(gen->distance(order[i].first, order[j].first) ==
                    gen->distance(order[i].second, order[j].second),
                Errc::PreconditionFailed, "pins not isometric");
      }
  }

  std::string rule() const override { return seeded ? "sample" : "generic"; }

  PointId map_new(PointId p) override {
    ExtensionRequest req = forced_request(p);
    if (!seeded) {
      for (PointId cand = 0; cand < gen->size(); ++cand)
        if (matches(cand, req)) return cand;
      return gen->realize_type(req);
    }
    std::vector<PointId> cands;
    std::size_t limit = std::min<std::size_t>(gen->size(), probe_window);
    for (PointId cand = 0; cand < limit; ++cand)
      if (matches(cand, req)) cands.push_back(cand);
    std::size_t pick = rng.below(cands.size() + 1);
    if (pick < cands.size()) return cands[pick];
    if (req.base.empty()) return PointId(rng.below(std::min<std::size_t>(gen->size(), probe_window)));
    return gen->realize_type(req);
  }

  bool matches(PointId cand, const ExtensionRequest& req) const {
    for (std::size_t i = 0; i < req.base.size(); ++i)
      if (gen->distance(cand, req.base[i]) != req.f[i]) return false;
    return true;
  }
};

/// Shared construction state of one pinching pair at (a, eps): image rows
/// (b_i, c_i) with b_i = c_i exactly off the open ball around a, mutual gap
/// eps (-) alpha inside it.
struct PinchState {
  GenPtr gen;
  PointId a;
  Dist eps;
  struct Row {
    PointId x;
    PointId b;
    PointId c;
    Dist alpha;
    bool inside;
  };
  std::vector<Row> rows;
  std::unordered_map<PointId, std::size_t> row_of;

  PinchState(GenPtr g, PointId a_, Dist eps_) : gen(std::move(g)), a(a_), eps(std::move(eps_)) {
    const MonoidSpec& m = gen->monoid();
    require(m.metrically_complete, Errc::NotMetricallyComplete, "pinching needs (-)");
    require(m.standard, Errc::PreconditionFailed, "pinching needs a standard monoid");
    require(!eps.is_zero(), Errc::ZeroEpsilon, "pinching needs eps != 0");
    check_carrier(m, eps);
    require(a < gen->size(), Errc::UnknownPoint, "pinch anchor");
    PointId c0 = gen->realize_type({{a}, {eps}});
    rows.push_back({a, a, c0, Dist(Rat(0)), true});
    row_of.emplace(a, 0);
  }

  const Row& ensure(PointId x) {
    auto it = row_of.find(x);
    if (it != row_of.end()) return rows[it->second];
    const MonoidSpec& m = gen->monoid();
    Dist alpha = gen->distance(a, x);
    Row row;
    row.x = x;
    row.alpha = alpha;
    row.inside = alpha < eps;
    if (!row.inside) {
      // One shared image with the within-side distances of x.
      ExtensionRequest req;
      for (const Row& r : rows) {
        Dist delta = gen->distance(x, r.x);
        req.base.push_back(r.b);
        req.f.push_back(delta);
        if (r.c != r.b) {
          req.base.push_back(r.c);
          req.f.push_back(delta);
        }
      }
      assert_katetov(req);
      PointId e = gen->realize_type(req);
      row.b = e;
      row.c = e;
    } else {
      Dist gap = minus(m, eps, alpha);
      auto cross = [&](const Row& r, const Dist& delta) {
        // distance between opposite sides for two inside points; the base
        // row is the alpha = 0 instance of the same formula (value eps)
        Dist v = max_dist(delta, minus(m, eps, r.alpha));
        return max_dist(v, gap);
      };
      ExtensionRequest breq;
      for (const Row& r : rows) {
        Dist delta = gen->distance(x, r.x);
        breq.base.push_back(r.b);
        breq.f.push_back(delta);
        if (r.c != r.b) {
          breq.base.push_back(r.c);
          breq.f.push_back(cross(r, delta));
        }
      }
      assert_katetov(breq);
      row.b = gen->realize_type(breq);
      ExtensionRequest creq;
      for (const Row& r : rows) {
        Dist delta = gen->distance(x, r.x);
        creq.base.push_back(r.c);
        creq.f.push_back(delta);
        if (r.b != r.c) {
          creq.base.push_back(r.b);
          creq.f.push_back(cross(r, delta));
        }
      }
      creq.base.push_back(row.b);
      creq.f.push_back(gap);
      assert_katetov(creq);
      row.c = gen->realize_type(creq);
    }
    rows.push_back(row);
    row_of.emplace(x, rows.size() - 1);
    return rows.back();
  }

  static Dist max_dist(const Dist& u, const Dist& v) { return u >= v ? u : v; }

  void assert_katetov(const ExtensionRequest& req) const {
    auto v = katetov_violation(gen->monoid(), req.base, req.f,
                               [&](PointId x, PointId y) { return gen->distance(x, y); });
    require(!v.has_value(), Errc::KatetovViolation,
            "pinch recursion produced an invalid vector (bug)");
  }
};

struct PinchSideImpl final : EmbImpl {
  std::shared_ptr<PinchState> st;
  bool left;

  PinchSideImpl(std::shared_ptr<PinchState> s, bool left_side)
      : EmbImpl(s->gen), st(std::move(s)), left(left_side) {}
  std::string rule() const override { return left ? "pinch-left" : "pinch-right"; }
  PointId map_new(PointId p) override {
    const auto& row = st->ensure(p);
    return left ? row.b : row.c;
  }
};

/// Shared construction state of one spreading pair at a: both sides fix a,
/// and opposite-side images sit at distance alpha_i (+) alpha_j.
struct SpreadState {
  GenPtr gen;
  PointId a;
  struct Row {
    PointId x;
    PointId b;
    PointId c;
    Dist alpha;
  };
  std::vector<Row> rows;
  std::unordered_map<PointId, std::size_t> row_of;

  SpreadState(GenPtr g, PointId a_, const Dist& eps) : gen(std::move(g)), a(a_) {
    require(gen->monoid().standard, Errc::PreconditionFailed, "spreading needs a standard monoid");
    require(!eps.is_zero(), Errc::ZeroEpsilon, "spreading needs eps != 0");
    check_carrier(gen->monoid(), eps);
    require(a < gen->size(), Errc::UnknownPoint, "spread anchor");
    rows.push_back({a, a, a, Dist(Rat(0))});
    row_of.emplace(a, 0);
  }

  const Row& ensure(PointId x) {
    auto it = row_of.find(x);
    if (it != row_of.end()) return rows[it->second];
    const MonoidSpec& m = gen->monoid();
    Dist alpha = gen->distance(a, x);
    Row row;
    row.x = x;
    row.alpha = alpha;
    ExtensionRequest breq;
    for (const Row& r : rows) {
      Dist delta = gen->distance(x, r.x);
      breq.base.push_back(r.b);
      breq.f.push_back(delta);
      if (r.c != r.b) {
        breq.base.push_back(r.c);
        breq.f.push_back(plus(m, alpha, r.alpha));
      }
    }
    assert_katetov(breq);
    row.b = gen->realize_type(breq);
    ExtensionRequest creq;
    for (const Row& r : rows) {
      Dist delta = gen->distance(x, r.x);
      creq.base.push_back(r.c);
      creq.f.push_back(delta);
      if (r.b != r.c) {
        creq.base.push_back(r.b);
        creq.f.push_back(plus(m, alpha, r.alpha));
      }
    }
    creq.base.push_back(row.b);
    creq.f.push_back(plus(m, alpha, alpha));
    assert_katetov(creq);
    row.c = gen->realize_type(creq);
    rows.push_back(row);
    row_of.emplace(x, rows.size() - 1);
    return rows.back();
  }

  void assert_katetov(const ExtensionRequest& req) const {
    auto v = katetov_violation(gen->monoid(), req.base, req.f,
                               [&](PointId x, PointId y) { return gen->distance(x, y); });
    require(!v.has_value(), Errc::KatetovViolation,
            "spread recursion produced an invalid vector (bug)");
  }
};

struct SpreadSideImpl final : EmbImpl {
  std::shared_ptr<SpreadState> st;
  bool left;

  SpreadSideImpl(std::shared_ptr<SpreadState> s, bool left_side)
      : EmbImpl(s->gen), st(std::move(s)), left(left_side) {}
  std::string rule() const override { return left ? "spread-left" : "spread-right"; }
  PointId map_new(PointId p) override {
    const auto& row = st->ensure(p);
    return left ? row.b : row.c;
  }
};

}  // namespace detail

/// Lazily extended isometric self-embedding of a generator prefix.
class Embedding {
 public:
  Embedding() = default;
  explicit Embedding(std::shared_ptr<detail::EmbImpl> impl) : impl_(std::move(impl)) {}

  GenPtr generator() const { return composite_ ? inner_->generator() : impl_->gen; }
  std::string rule() const { return composite_ ? "composite" : impl_->rule(); }

  /// On-demand image (order-free exploration).
  PointId eval(PointId p) const {
    if (composite_) return outer_->eval(inner_->eval(p));
    return impl_->eval(p);
  }

  std::optional<PointId> image_of(PointId p) const {
    if (composite_) {
      auto q = inner_->image_of(p);
      if (!q) return std::nullopt;
      return outer_->image_of(*q);
    }
    return impl_->image_of(p);
  }

  void advance() const {
    if (composite_) {
      std::size_t p = (*comp_advances_)++;
      if (p < generator()->size()) eval(PointId(p));
      return;
    }
    impl_->advance();
  }

  std::size_t advances() const { return composite_ ? *comp_advances_ : impl_->advances; }

  /// Exploration pairs in order of discovery.
  std::vector<std::pair<PointId, PointId>> explored_pairs() const {
    if (!composite_) return impl_->order;
    std::vector<std::pair<PointId, PointId>> out;
    for (const auto& [x, q] : inner_->explored_pairs()) {
      auto y = outer_->image_of(q);
      if (y) out.emplace_back(x, *y);
    }
    return out;
  }

  /// Advances until p is explored; at most `depth` advances.
  PointId apply_at(PointId p, int depth) const {
    if (auto v = image_of(p)) return *v;
    for (int i = 0; i < depth; ++i) {
      advance();
      if (auto v = image_of(p)) return *v;
    }
    fail(Errc::DepthExceeded,
         "point " + std::to_string(p) + " not reached in " + std::to_string(depth) + " advances");
  }

  static Embedding compose(const Embedding& f, const Embedding& g) {
    require(f.generator() == g.generator(), Errc::GeneratorMismatch,
            "compose needs a shared generator");
    Embedding e;
    e.composite_ = true;
    e.outer_ = std::make_shared<Embedding>(f);
    e.inner_ = std::make_shared<Embedding>(g);
    e.comp_advances_ = std::make_shared<std::size_t>(0);
    return e;
  }

 private:
  std::shared_ptr<detail::EmbImpl> impl_;
  bool composite_ = false;
  std::shared_ptr<Embedding> outer_, inner_;
  std::shared_ptr<std::size_t> comp_advances_;
};

inline Embedding make_identity_embedding(const GenPtr& g) {
  return Embedding(std::make_shared<detail::IdentityImpl>(g));
}

inline Embedding make_pinned_embedding(const GenPtr& g,
                                       std::vector<std::pair<PointId, PointId>> pins) {
  return Embedding(std::make_shared<detail::GenericImpl>(g, std::move(pins), false, 0, 0));
}

/// Deterministic pseudorandom back-and-forth embedding advanced n times.
inline Embedding sample_embedding(const GenPtr& g, std::uint64_t seed, std::size_t n,
                                  std::size_t probe_window = 64) {
  g->ensure_seed();
  Embedding e(std::make_shared<detail::GenericImpl>(
      g, std::vector<std::pair<PointId, PointId>>{}, true, seed, probe_window));
  for (std::size_t i = 0; i < n; ++i) e.advance();
  return e;
}

inline Embedding compose(const Embedding& f, const Embedding& g) {
  return Embedding::compose(f, g);
}

/// Pinching pair at (a, eps): the two sides agree exactly on explored points
/// at distance >= eps from a and differ (by at least eps (-) alpha) inside.
inline std::pair<Embedding, Embedding> pinching_pair(const GenPtr& g, PointId a, const Dist& eps) {
  auto st = std::make_shared<detail::PinchState>(g, a, eps);
  return {Embedding(std::make_shared<detail::PinchSideImpl>(st, true)),
          Embedding(std::make_shared<detail::PinchSideImpl>(st, false))};
}

/// Spreading pair at a: a lies in both images, and explored opposite-side
/// images within eps of each other force the point into the eps-ball of a.
inline std::pair<Embedding, Embedding> spreading_pair(const GenPtr& g, PointId a,
                                                      const Dist& eps) {
  auto st = std::make_shared<detail::SpreadState>(g, a, eps);
  return {Embedding(std::make_shared<detail::SpreadSideImpl>(st, true)),
          Embedding(std::make_shared<detail::SpreadSideImpl>(st, false))};
}

/// True when the explored part of e is injective and distance preserving.
inline bool embedding_isometric_on_explored(const Embedding& e) {
  auto pairs = e.explored_pairs();
  GenPtr g = e.generator();
  for (std::size_t i = 0; i < pairs.size(); ++i)
    for (std::size_t j = i + 1; j < pairs.size(); ++j) {
      if (pairs[i].second == pairs[j].second) return false;
      if (g->distance(pairs[i].first, pairs[j].first) !=
          g->distance(pairs[i].second, pairs[j].second))
        return false;
    }
  return true;
}

/// An embedding s with s(a) inside the eps-ball of b that provably moves some
/// point of dom(phi) off its phi-image. Exists for every nonempty finite phi.
inline Embedding separation_witness(const GenPtr& g, const PartialIsometry& phi, PointId a,
                                    PointId b, const Dist& eps) {
  require(!phi.pairs.empty(), Errc::PreconditionFailed,
          "separation_witness needs a nonempty constraint map");
  require(!eps.is_zero(), Errc::ZeroEpsilon, "separation_witness needs eps != 0");
  require(a < g->size() && b < g->size(), Errc::UnknownPoint, "separation anchor points");

  // psi = phi with (a -> b) adjoined; decide whether it is a partial isometry.
  std::vector<std::pair<PointId, PointId>> psi = phi.pairs;
  bool conflict = false;
  for (const auto& [x, y] : phi.pairs) {
    if (x == a && y != b) conflict = true;
    if (y == b && x != a) conflict = true;
    if (x != a && g->distance(a, x) != g->distance(b, y)) conflict = true;
  }
  bool a_in_dom = phi.in_domain(a);
  if (!a_in_dom) psi.emplace_back(a, b);
  for (std::size_t i = 0; i < psi.size() && !conflict; ++i)
    for (std::size_t j = i + 1; j < psi.size() && !conflict; ++j)
      conflict |= (g->distance(psi[i].first, psi[j].first) !=
                   g->distance(psi[i].second, psi[j].second));

  if (conflict) {
    // Any embedding with s(a) = b avoids N_phi outright.
    return make_pinned_embedding(g, {{a, b}});
  }
  if (psi.size() == 1) {
    // Only constraint is (a -> b): send a next to b but not onto it.
    Dist t = standard_gap(g->monoid(), eps, Dist(Rat(0)));
    PointId b_near = g->realize_type({{b}, {t}});
    return make_pinned_embedding(g, {{a, b_near}});
  }
  // Double amalgam: realize a disjoint copy of im(psi) over the shared point
  // b and send dom(psi) onto the copy. Every non-anchor constraint point is
  // then moved off its phi-image.
  std::vector<PointId> others;
  for (const auto& [x, y] : psi)
    if (y != b) others.push_back(y);
  std::sort(others.begin(), others.end());
  std::unordered_map<PointId, PointId> copy;
  copy.emplace(b, b);
  std::vector<PointId> done;  // originals already copied
  for (PointId q : others) {
    ExtensionRequest req;
    req.base.push_back(b);
    req.f.push_back(g->distance(q, b));
    for (PointId r : others) {
      if (r == q) continue;
      req.base.push_back(r);
      req.f.push_back(plus(g->monoid(), g->distance(q, b), g->distance(b, r)));
    }
    for (PointId r : done) {
      req.base.push_back(copy.at(r));
      req.f.push_back(g->distance(q, r));
    }
    copy.emplace(q, g->realize_type(req));
    done.push_back(q);
  }
  std::vector<std::pair<PointId, PointId>> pins;
  for (const auto& [x, y] : psi) pins.emplace_back(x, copy.at(y));
  return make_pinned_embedding(g, pins);
}

}  // namespace homog
