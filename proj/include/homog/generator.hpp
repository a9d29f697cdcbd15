#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "homog/error.hpp"
#include "homog/monoid.hpp"
#include "homog/space.hpp"

namespace homog {

/// Incrementally generated countable Urysohn space over a distance monoid.
///
/// The prefix is stored lazily: each point keeps only its creation record
/// (base points and requested distances); other distances are derived from
/// the amalgam formula on demand and memoized. The scheduler enumerates
/// requests in levels: level L covers every subset of ids {0..L-1} and every
/// vector over the level-L grid, so each Katetov request over each finite
/// subset is dequeued at some finite cursor (fairness), with small requests
/// appearing early.
class Generator {
 public:
  struct LogEntry {
    std::uint64_t cursor;
    std::vector<PointId> base;
    std::vector<Dist> f;
    enum class Outcome { Seed, Realized, Duplicate, SkippedInvalid, SkippedMissing } outcome;
    PointId point = 0;  // meaningful for Seed/Realized/Duplicate
  };

  explicit Generator(MonoidSpec m) : monoid_(std::move(m)) {}

  const MonoidSpec& monoid() const { return monoid_; }
  std::size_t size() const { return pts_.size(); }
  std::uint64_t cursor() const { return cursor_; }
  const std::vector<LogEntry>& log() const { return log_; }

  /// Exact distance between two existing points.
  Dist distance(PointId p, PointId q) const {
    require(p < pts_.size() && q < pts_.size(), Errc::UnknownPoint, "distance: unknown point");
    if (p == q) return Dist(Rat(0));
    PointId lo = p < q ? p : q, hi = p < q ? q : p;
    std::uint64_t key = (std::uint64_t(hi) << 32) | lo;
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    // hi was created after lo; use its creation record.
    const auto& rec = pts_[hi];
    std::optional<Dist> val;
    for (const auto& [z, fz] : rec.base) {
      if (z == lo) {
        val = fz;
        break;
      }
    }
    if (!val) {
      for (const auto& [z, fz] : rec.base) {
        Dist v = plus(monoid_, fz, distance(z, lo));
        if (!val || v < *val) val = v;
      }
    }
    require(val.has_value(), Errc::UnknownPoint, "distance: point with empty record");
    memo_.emplace(key, *val);
    return *val;
  }

  /// Dense snapshot of the first n points (all points when n == npos).
  Space snapshot(std::size_t n = SIZE_MAX) const {
    if (n > pts_.size()) n = pts_.size();
    Space s;
    s.monoid = monoid_;
    s.points.resize(n);
    for (std::size_t i = 0; i < n; ++i) s.points[i] = PointId(i);
    s.dist.assign(n * n, Dist());
    for (PointId i = 0; i < n; ++i)
      for (PointId j = i + 1; j < n; ++j) {
        Dist v = distance(i, j);
        s.d(i, j) = v;
        s.d(j, i) = v;
      }
    return s;
  }

  /// Immediately realizes the requested point (out of schedule order).
  /// A zero requested distance returns the existing point instead.
  PointId realize_type(const ExtensionRequest& req) {
    require(req.base.size() == req.f.size(), Errc::PreconditionFailed, "base/f length mismatch");
    require(!req.base.empty(), Errc::PreconditionFailed, "realize_type: empty base");
    for (std::size_t i = 0; i < req.base.size(); ++i) {
      require(req.base[i] < pts_.size(), Errc::UnknownPoint,
              "realize_type: unknown base point " + std::to_string(req.base[i]));
      if (req.f[i].is_zero()) return req.base[i];
      check_carrier(monoid_, req.f[i]);
    }
    if (auto v = katetov_violation(monoid_, req.base, req.f,
                                   [&](PointId x, PointId y) { return distance(x, y); }))
      fail(Errc::KatetovViolation, "realize_type: request violates triangle constraints at (" +
                                       std::to_string(v->x) + "," + std::to_string(v->y) + ")");
    return append_point({req.base, req.f});
  }

  /// Seeds the first point if the prefix is empty; returns its id.
  PointId ensure_seed() {
    if (pts_.empty()) pts_.push_back({});
    return 0;
  }

  /// Dequeues the next scheduled request and realizes it when valid.
  void step() {
    Request r = decode_cursor();
    advance_cursor();
    LogEntry e;
    e.cursor = cursor_ - 1;
    e.base = r.base;
    e.f = r.f;
    if (r.base.empty()) {
      if (pts_.empty()) {
        pts_.push_back({});
        e.outcome = LogEntry::Outcome::Seed;
        e.point = 0;
      } else {
        e.outcome = LogEntry::Outcome::SkippedInvalid;
      }
      log_.push_back(std::move(e));
      return;
    }
    bool ok = true;
    for (PointId p : r.base) ok &= (p < pts_.size());
    if (!ok) {
      e.outcome = LogEntry::Outcome::SkippedMissing;
      log_.push_back(std::move(e));
      return;
    }
    for (const Dist& v : r.f) ok &= !v.is_zero();
    if (ok)
      ok = !katetov_violation(monoid_, r.base, r.f,
                              [&](PointId x, PointId y) { return distance(x, y); })
                .has_value();
    if (!ok) {
      e.outcome = LogEntry::Outcome::SkippedInvalid;
      log_.push_back(std::move(e));
      return;
    }
    std::uint64_t key = request_key(r.base, r.f);
    if (realized_.count(key)) {
      e.outcome = LogEntry::Outcome::Duplicate;
      e.point = realized_.at(key);
      log_.push_back(std::move(e));
      return;
    }
    PointId p = append_point({r.base, r.f});
    realized_.emplace(key, p);
    e.outcome = LogEntry::Outcome::Realized;
    e.point = p;
    log_.push_back(std::move(e));
  }

  void run(std::uint64_t steps) {
    for (std::uint64_t i = 0; i < steps; ++i) step();
  }

  /// Extends a partial isometry of the prefix over one more point, reusing
  /// the lowest-id existing match or realizing a fresh image.
  PointId extend_partial_isometry(const PartialIsometry& phi, PointId target) {
    require(!phi.in_domain(target), Errc::PreconditionFailed, "target already in domain");
    require(target < pts_.size(), Errc::UnknownPoint, "unknown target point");
    std::vector<PointId> base;
    std::vector<Dist> forced;
    for (const auto& [src, dst] : phi.pairs) {
      base.push_back(dst);
      forced.push_back(distance(target, src));
    }
    for (PointId cand = 0; cand < pts_.size(); ++cand) {
      bool match = true;
      for (std::size_t i = 0; i < base.size() && match; ++i)
        match = (distance(cand, base[i]) == forced[i]);
      if (match) return cand;
    }
    return realize_type({base, forced});
  }

  /// Searches existing points for one realizing the request exactly.
  std::optional<PointId> find_realizing_point(const ExtensionRequest& req) const {
    for (PointId cand = 0; cand < pts_.size(); ++cand) {
      bool match = true;
      for (std::size_t i = 0; i < req.base.size() && match; ++i)
        match = (distance(cand, req.base[i]) == req.f[i]);
      if (match) return cand;
    }
    return std::nullopt;
  }

  struct EpReport {
    std::size_t requests = 0;
    std::size_t realized = 0;
    std::vector<ExtensionRequest> budget_exceeded;
    bool all_realized() const { return realized == requests; }
  };

  /// Runs the scheduler up to `budget` further steps, then reports which
  /// Katetov requests over subsets (size <= 3) of the first base_bound points
  /// with grid-level distances got a realizing point.
  EpReport verify_extension_property(std::size_t base_bound, int grid_level,
                                     std::uint64_t budget) {
    run(budget);
    if (base_bound > pts_.size()) base_bound = pts_.size();
    EpReport rep;
    std::vector<Dist> grid = grid_values(monoid_, grid_level);
    std::vector<Dist> nz;
    for (const Dist& g : grid)
      if (!g.is_zero()) nz.push_back(g);
    std::vector<PointId> subset;
    for (std::uint32_t mask = 1; mask < (1u << base_bound); ++mask) {
      if (__builtin_popcount(mask) > 3) continue;
      subset.clear();
      for (std::size_t i = 0; i < base_bound; ++i)
        if (mask & (1u << i)) subset.push_back(PointId(i));
      std::vector<std::size_t> idx(subset.size(), 0);
      while (true) {
        ExtensionRequest req;
        req.base = subset;
        for (std::size_t i = 0; i < subset.size(); ++i) req.f.push_back(nz[idx[i]]);
        bool valid = !katetov_violation(monoid_, req.base, req.f, [&](PointId x, PointId y) {
                        return distance(x, y);
                      }).has_value();
        if (valid) {
          ++rep.requests;
          if (find_realizing_point(req))
            ++rep.realized;
          else
            rep.budget_exceeded.push_back(req);
        }
        std::size_t k = 0;
        while (k < idx.size() && ++idx[k] == nz.size()) idx[k++] = 0;
        if (k == idx.size()) break;
      }
    }
    return rep;
  }

 private:
  struct PointRec {
    std::vector<std::pair<PointId, Dist>> base;  // empty for the seed
  };
  struct Request {
    std::vector<PointId> base;
    std::vector<Dist> f;
  };

  PointId append_point(const Request& r) {
    PointRec rec;
    for (std::size_t i = 0; i < r.base.size(); ++i) rec.base.emplace_back(r.base[i], r.f[i]);
    pts_.push_back(std::move(rec));
    return PointId(pts_.size() - 1);
  }

  static std::uint64_t request_key(const std::vector<PointId>& base, const std::vector<Dist>& f) {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](std::uint64_t v) {
      h ^= v;
      h *= 1099511628211ULL;
    };
    for (std::size_t i = 0; i < base.size(); ++i) {
      mix(base[i]);
      mix(f[i].hash());
    }
    return h;
  }

  // Schedule decoding: level L enumerates every subset mask of {0..L-1}
  // (ascending) and for each mask every vector over the level grid via an
  // odometer (empty vector for the empty mask).
  Request decode_cursor() {
    sync_level();
    Request r;
    for (std::size_t i = 0; i < std::size_t(level_); ++i)
      if (mask_ & (1ull << i)) r.base.push_back(PointId(i));
    for (std::size_t i = 0; i < r.base.size(); ++i) r.f.push_back(level_grid_[odo_[i]]);
    return r;
  }

  void sync_level() {
    if (level_grid_.empty()) level_grid_ = grid_values(monoid_, level_);
  }

  void advance_cursor() {
    ++cursor_;
    std::size_t k = 0;
    while (k < odo_.size() && ++odo_[k] == level_grid_.size()) odo_[k++] = 0;
    if (k < odo_.size()) return;  // odometer advanced within this mask
    ++mask_;
    if (mask_ < (1ull << level_)) {
      odo_.assign(std::size_t(__builtin_popcountll(mask_)), 0);
      return;
    }
    ++level_;
    if (level_ > 62) fail(Errc::BudgetExceeded, "schedule level overflow");
    mask_ = 0;
    odo_.clear();
    level_grid_ = grid_values(monoid_, level_);
  }

  MonoidSpec monoid_;
  std::vector<PointRec> pts_;
  mutable std::unordered_map<std::uint64_t, Dist> memo_;
  std::vector<LogEntry> log_;
  std::unordered_map<std::uint64_t, PointId> realized_;

  std::uint64_t cursor_ = 0;
  int level_ = 1;
  std::uint64_t mask_ = 0;
  std::vector<std::size_t> odo_;
  std::vector<Dist> level_grid_;
};

using GenPtr = std::shared_ptr<Generator>;

inline GenPtr make_generator(const MonoidSpec& m) { return std::make_shared<Generator>(m); }

}  // namespace homog
