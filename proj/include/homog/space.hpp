#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "homog/error.hpp"
#include "homog/monoid.hpp"
#include "homog/prng.hpp"

namespace homog {

using PointId = std::uint32_t;

/// A finite generalized metric space over a distance monoid. Immutable by
/// convention: extension operations return a new Space. Points are dense ids
/// 0..n-1 in insertion order.
struct Space {
  MonoidSpec monoid;
  std::vector<PointId> points;
  std::vector<Dist> dist;  // row-major n*n, symmetric, zero diagonal

  std::size_t size() const { return points.size(); }
  const Dist& d(PointId x, PointId y) const { return dist[std::size_t(x) * points.size() + y]; }
  Dist& d(PointId x, PointId y) { return dist[std::size_t(x) * points.size() + y]; }
  bool has_point(PointId p) const { return p < points.size(); }
};

inline Space make_space(const MonoidSpec& m, std::size_t n, const std::vector<Dist>& matrix) {
  require(matrix.size() == n * n, Errc::PreconditionFailed, "matrix must be n*n");
  Space s;
  s.monoid = m;
  s.points.resize(n);
  for (std::size_t i = 0; i < n; ++i) s.points[i] = PointId(i);
  s.dist = matrix;
  return s;
}

enum class MetricAxiom { Identity, Symmetry, Triangle };

struct MetricViolation {
  MetricAxiom axiom;
  PointId x = 0, y = 0, z = 0;  // z used by Triangle only
};

/// Checks the three metric axioms; returns the first violation found.
inline std::optional<MetricViolation> validate_space(const Space& s) {
  const std::size_t n = s.size();
  for (PointId x = 0; x < n; ++x) {
    if (!s.d(x, x).is_zero()) return MetricViolation{MetricAxiom::Identity, x, x};
    for (PointId y = 0; y < n; ++y) {
      if (x != y && s.d(x, y).is_zero()) return MetricViolation{MetricAxiom::Identity, x, y};
      if (s.d(x, y) != s.d(y, x)) return MetricViolation{MetricAxiom::Symmetry, x, y};
      check_carrier(s.monoid, s.d(x, y));
    }
  }
  for (PointId x = 0; x < n; ++x)
    for (PointId y = 0; y < n; ++y)
      for (PointId z = 0; z < n; ++z)
        if (s.d(x, z) > plus(s.monoid, s.d(x, y), s.d(y, z)))
          return MetricViolation{MetricAxiom::Triangle, x, z, y};
  return std::nullopt;
}

/// A finite injective distance-preserving map, kept sorted by source id.
struct PartialIsometry {
  std::vector<std::pair<PointId, PointId>> pairs;

  void add(PointId src, PointId dst) {
    auto it = std::lower_bound(pairs.begin(), pairs.end(), std::make_pair(src, PointId(0)),
                               [](const auto& a, const auto& b) { return a.first < b.first; });
    pairs.insert(it, {src, dst});
  }
  std::optional<PointId> apply(PointId src) const {
    for (const auto& [a, b] : pairs)
      if (a == src) return b;
    return std::nullopt;
  }
  bool in_domain(PointId src) const { return apply(src).has_value(); }
  std::size_t size() const { return pairs.size(); }
};

struct IsometryViolation {
  PointId x, y;  // offending pair of domain points (x==y for unknown point)
  bool injectivity = false;
};

inline std::optional<IsometryViolation> check_partial_isometry(const PartialIsometry& phi,
                                                               const Space& src,
                                                               const Space& dst) {
  for (const auto& [a, b] : phi.pairs) {
    require(src.has_point(a), Errc::UnknownPoint, "source point " + std::to_string(a));
    require(dst.has_point(b), Errc::UnknownPoint, "target point " + std::to_string(b));
  }
  for (std::size_t i = 0; i < phi.pairs.size(); ++i)
    for (std::size_t j = i + 1; j < phi.pairs.size(); ++j) {
      const auto& [a1, b1] = phi.pairs[i];
      const auto& [a2, b2] = phi.pairs[j];
      if (a1 == a2 || b1 == b2) return IsometryViolation{a1, a2, true};
      if (src.d(a1, a2) != dst.d(b1, b2)) return IsometryViolation{a1, a2, false};
    }
  return std::nullopt;
}

/// One-point extension request: desired distances f from a new point to the
/// base subset. Valid when both one-point triangle constraints hold.
struct ExtensionRequest {
  std::vector<PointId> base;
  std::vector<Dist> f;

  const Dist& value_at(PointId p) const {
    for (std::size_t i = 0; i < base.size(); ++i)
      if (base[i] == p) return f[i];
    fail(Errc::UnknownPoint, "no requested distance for point " + std::to_string(p));
  }
};

struct KatetovViolationInfo {
  PointId x, y;
};

/// Core pairwise conditions, shared with the generator's lazy store:
/// f(x) <= d(x,y) (+) f(y) and d(x,y) <= f(x) (+) f(y) over all base pairs.
inline std::optional<KatetovViolationInfo> katetov_violation(
    const MonoidSpec& m, const std::vector<PointId>& base, const std::vector<Dist>& f,
    const std::function<Dist(PointId, PointId)>& d) {
  for (std::size_t i = 0; i < base.size(); ++i)
    for (std::size_t j = 0; j < base.size(); ++j) {
      if (i == j) continue;
      Dist dij = d(base[i], base[j]);
      if (f[i] > plus(m, dij, f[j])) return KatetovViolationInfo{base[i], base[j]};
      if (i < j && dij > plus(m, f[i], f[j])) return KatetovViolationInfo{base[i], base[j]};
    }
  return std::nullopt;
}

inline std::optional<KatetovViolationInfo> check_katetov(const Space& s,
                                                         const ExtensionRequest& req) {
  require(req.base.size() == req.f.size(), Errc::PreconditionFailed, "base/f length mismatch");
  for (std::size_t i = 0; i < req.base.size(); ++i) {
    require(s.has_point(req.base[i]), Errc::UnknownPoint,
            "base point " + std::to_string(req.base[i]));
    require(!req.f[i].is_zero(), Errc::ZeroDistance,
            "zero distance requested at point " + std::to_string(req.base[i]));
    check_carrier(s.monoid, req.f[i]);
  }
  return katetov_violation(s.monoid, req.base, req.f,
                           [&](PointId x, PointId y) { return s.d(x, y); });
}

struct AmalgamResult {
  Space space;
  std::vector<PointId> from_a;  // image of each a-point in the result
  std::vector<PointId> from_b;  // image of each b-point in the result
};

/// Independent amalgam A (x) B over the common part identified by `glue`
/// (pairs (a-point, b-point)). Cross distances take the minimum over glue
/// points z of d_A(x,z) (+) d_B(z,y).
inline AmalgamResult amalgam(const Space& a, const Space& b, const PartialIsometry& glue) {
  require(!glue.pairs.empty(), Errc::EmptyGlue, "amalgam needs a nonempty common part");
  if (auto v = check_partial_isometry(glue, a, b))
    fail(Errc::GlueNotIsometric,
         "glue violates isometry at (" + std::to_string(v->x) + "," + std::to_string(v->y) + ")");

  AmalgamResult out;
  out.space.monoid = a.monoid;
  out.from_a.resize(a.size());
  out.from_b.assign(b.size(), PointId(0));
  std::vector<bool> b_glued(b.size(), false);

  for (std::size_t i = 0; i < a.size(); ++i) out.from_a[i] = PointId(i);
  for (const auto& [ap, bp] : glue.pairs) {
    out.from_b[bp] = PointId(ap);
    b_glued[bp] = true;
  }
  std::size_t n = a.size();
  for (std::size_t j = 0; j < b.size(); ++j)
    if (!b_glued[j]) out.from_b[j] = PointId(n++);

  out.space.points.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.space.points[i] = PointId(i);
  out.space.dist.assign(n * n, Dist());

  auto cross = [&](PointId ax, PointId by) {
    std::optional<Dist> best;
    for (const auto& [az, bz] : glue.pairs) {
      Dist v = plus(a.monoid, a.d(ax, az), b.d(bz, by));
      if (!best || v < *best) best = v;
    }
    return *best;
  };

  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      out.space.d(out.from_a[i], out.from_a[j]) = a.d(PointId(i), PointId(j));
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      out.space.d(out.from_b[i], out.from_b[j]) = b.d(PointId(i), PointId(j));
  for (std::size_t i = 0; i < a.size(); ++i) {
    bool a_glued = false;
    for (const auto& [ap, bp] : glue.pairs) a_glued |= (ap == PointId(i));
    if (a_glued) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (b_glued[j]) continue;
      Dist v = cross(PointId(i), PointId(j));
      out.space.d(out.from_a[i], out.from_b[j]) = v;
      out.space.d(out.from_b[j], out.from_a[i]) = v;
    }
  }
  return out;
}

/// Adds one fresh point with the requested distances; distances to points
/// outside the base come from the amalgam formula. If some requested distance
/// is zero the existing point is returned instead of a duplicate.
inline std::pair<Space, PointId> extend_one_point(const Space& s, const ExtensionRequest& req) {
  require(req.base.size() == req.f.size(), Errc::PreconditionFailed, "base/f length mismatch");
  for (std::size_t i = 0; i < req.base.size(); ++i) {
    require(s.has_point(req.base[i]), Errc::UnknownPoint,
            "base point " + std::to_string(req.base[i]));
    if (req.f[i].is_zero()) return {s, req.base[i]};
  }
  require(!req.base.empty(), Errc::PreconditionFailed, "extend_one_point: empty base");
  if (auto v = check_katetov(s, req))
    fail(Errc::KatetovViolation, "request violates triangle constraints at (" +
                                     std::to_string(v->x) + "," + std::to_string(v->y) + ")");

  const std::size_t n = s.size();
  Space out;
  out.monoid = s.monoid;
  out.points.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) out.points[i] = PointId(i);
  out.dist.assign((n + 1) * (n + 1), Dist());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out.d(PointId(i), PointId(j)) = s.d(PointId(i), PointId(j));

  PointId p = PointId(n);
  for (PointId w = 0; w < n; ++w) {
    std::optional<Dist> val;
    for (std::size_t i = 0; i < req.base.size(); ++i) {
      if (req.base[i] == w) {
        val = req.f[i];
        break;
      }
    }
    if (!val) {
      for (std::size_t i = 0; i < req.base.size(); ++i) {
        Dist v = plus(s.monoid, s.d(w, req.base[i]), req.f[i]);
        if (!val || v < *val) val = v;
      }
    }
    out.d(p, w) = *val;
    out.d(w, p) = *val;
  }
  return {out, p};
}

// --- randomized construction helpers (used by sampled checks) --------------

/// Random valid space with up to max_points points: random symmetric positive
/// grid entries repaired into a path metric (min over (+)-sums), which
/// satisfies all three axioms for any distance monoid.
inline Space random_space(const MonoidSpec& m, SplitMix64& rng, std::size_t max_points,
                          int grid_level = 6) {
  std::size_t n = 1 + rng.below(max_points);
  std::vector<Dist> grid = grid_values(m, grid_level);
  std::vector<Dist> nonzero;
  for (const Dist& g : grid)
    if (!g.is_zero()) nonzero.push_back(g);

  Space s;
  s.monoid = m;
  s.points.resize(n);
  for (std::size_t i = 0; i < n; ++i) s.points[i] = PointId(i);
  s.dist.assign(n * n, Dist());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      Dist v = nonzero[rng.below(nonzero.size())];
      s.d(PointId(i), PointId(j)) = v;
      s.d(PointId(j), PointId(i)) = v;
    }
  // Floyd-Warshall style repair; (+) is associative/commutative/monotone so
  // the shortest-path closure is a valid metric, and positivity keeps
  // off-diagonal entries nonzero.
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        Dist via = plus(m, s.d(PointId(i), PointId(k)), s.d(PointId(k), PointId(j)));
        if (via < s.d(PointId(i), PointId(j))) s.d(PointId(i), PointId(j)) = via;
      }
  return s;
}

/// Random Katetov function over a subset: f(z) = d(z, w) (+) rho for a random
/// anchor w and nonzero radius rho. Always valid.
inline ExtensionRequest random_katetov_request(const Space& s, SplitMix64& rng,
                                               const std::vector<PointId>& base,
                                               int grid_level = 6) {
  std::vector<Dist> grid = grid_values(s.monoid, grid_level);
  std::vector<Dist> nonzero;
  for (const Dist& g : grid)
    if (!g.is_zero()) nonzero.push_back(g);
  PointId w = PointId(rng.below(s.size()));
  Dist rho = nonzero[rng.below(nonzero.size())];
  ExtensionRequest req;
  req.base = base;
  for (PointId z : base) req.f.push_back(plus(s.monoid, s.d(z, w), rho));
  return req;
}

}  // namespace homog
