#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "homog/error.hpp"
#include "homog/rational.hpp"

namespace homog {

// The four shipped countable distance monoids. All are metrically complete
// and standard; only the max-monoid is ultrametric.
enum class MonoidKind {
  RationalsNonneg,        // (Q>=0, +)
  TruncatedUnitRationals,  // (Q n [0,top], + truncated at top)
  LexPairRationals,       // ((QxQ)>=0 lex, componentwise +)
  UltrametricRationals,   // (Q>=0, max)
};

/// An abstract distance. Scalar kinds use `a` only (`b` stays 0); the lex
/// kind uses the pair (a, b) ordered lexicographically. Note the lex carrier
/// admits negative second components whenever the first is positive.
struct Dist {
  Rat a;
  Rat b;

  Dist() = default;
  Dist(Rat main) : a(std::move(main)) {}  // NOLINT: implicit scalar distances
  Dist(long n) : a(Rat(n)) {}             // NOLINT
  Dist(Rat main, Rat minor) : a(std::move(main)), b(std::move(minor)) {}

  int cmp(const Dist& o) const {
    int c = a.cmp(o.a);
    return c != 0 ? c : b.cmp(o.b);
  }
  bool is_zero() const { return a.is_zero() && b.is_zero(); }

  friend bool operator==(const Dist& x, const Dist& y) { return x.cmp(y) == 0; }
  friend bool operator!=(const Dist& x, const Dist& y) { return x.cmp(y) != 0; }
  friend bool operator<(const Dist& x, const Dist& y) { return x.cmp(y) < 0; }
  friend bool operator<=(const Dist& x, const Dist& y) { return x.cmp(y) <= 0; }
  friend bool operator>(const Dist& x, const Dist& y) { return x.cmp(y) > 0; }
  friend bool operator>=(const Dist& x, const Dist& y) { return x.cmp(y) >= 0; }

  std::size_t hash() const { return a.hash() * 0x9e3779b97f4a7c15ULL + b.hash(); }
  std::string str() const { return b.is_zero() ? a.str() : a.str() + "," + b.str(); }
};

struct MonoidSpec {
  MonoidKind kind = MonoidKind::RationalsNonneg;
  std::optional<Dist> top;  // set for bounded kinds only
  bool metrically_complete = true;
  bool standard = true;
  bool ultrametric = false;

  bool bounded() const { return top.has_value(); }
  bool scalar() const { return kind != MonoidKind::LexPairRationals; }
};

inline const char* monoid_kind_name(MonoidKind k) {
  switch (k) {
    case MonoidKind::RationalsNonneg: return "q_nonneg";
    case MonoidKind::TruncatedUnitRationals: return "q_unit_trunc";
    case MonoidKind::LexPairRationals: return "q_lex2";
    case MonoidKind::UltrametricRationals: return "q_ultra";
  }
  return "?";
}

inline MonoidKind monoid_kind_from_name(const std::string& s) {
  if (s == "q_nonneg") return MonoidKind::RationalsNonneg;
  if (s == "q_unit_trunc") return MonoidKind::TruncatedUnitRationals;
  if (s == "q_lex2") return MonoidKind::LexPairRationals;
  if (s == "q_ultra") return MonoidKind::UltrametricRationals;
  fail(Errc::UnknownKind, "monoid kind '" + s + "'");
}

inline std::string dist_str(const MonoidSpec& m, const Dist& d) {
  if (m.scalar()) return d.a.str();
  return "(" + d.a.str() + "," + d.b.str() + ")";
}

inline MonoidSpec make_monoid(MonoidKind kind, std::optional<Rat> bound = std::nullopt) {
  MonoidSpec m;
  m.kind = kind;
  switch (kind) {
    case MonoidKind::RationalsNonneg:
    case MonoidKind::LexPairRationals:
    case MonoidKind::UltrametricRationals:
      require(!bound.has_value(), Errc::InvalidBound, "unbounded kind takes no bound");
      m.ultrametric = (kind == MonoidKind::UltrametricRationals);
      break;
    case MonoidKind::TruncatedUnitRationals: {
      Rat top = bound.value_or(Rat(1));
      require(top.sign() > 0, Errc::InvalidBound, "bound must be > 0");
      m.top = Dist(top);
      break;
    }
  }
  return m;
}

inline bool in_carrier(const MonoidSpec& m, const Dist& d) {
  switch (m.kind) {
    case MonoidKind::RationalsNonneg:
    case MonoidKind::UltrametricRationals:
      return d.a.sign() >= 0 && d.b.is_zero();
    case MonoidKind::TruncatedUnitRationals:
      return d.a.sign() >= 0 && d.b.is_zero() && Dist(d.a) <= *m.top;
    case MonoidKind::LexPairRationals:
      return d.a.sign() > 0 || (d.a.is_zero() && d.b.sign() >= 0);
  }
  return false;
}

inline void check_carrier(const MonoidSpec& m, const Dist& d) {
  require(in_carrier(m, d), Errc::CarrierMismatch,
          dist_str(m, d) + " not in carrier of " + monoid_kind_name(m.kind));
}

/// Monoid sum r (+) s.
inline Dist plus(const MonoidSpec& m, const Dist& r, const Dist& s) {
  check_carrier(m, r);
  check_carrier(m, s);
  switch (m.kind) {
    case MonoidKind::RationalsNonneg:
      return Dist(r.a + s.a);
    case MonoidKind::TruncatedUnitRationals: {
      Rat sum = r.a + s.a;
      return Dist(min(sum, m.top->a));
    }
    case MonoidKind::LexPairRationals:
      return Dist(r.a + s.a, r.b + s.b);
    case MonoidKind::UltrametricRationals:
      return Dist(max(r.a, s.a));
  }
  fail(Errc::UnknownKind, "plus");
}

/// Truncated difference r (-) s: the least t with r <= s (+) t. Defined when
/// s <= r; all four kinds are metrically complete so the least element exists.
inline Dist minus(const MonoidSpec& m, const Dist& r, const Dist& s) {
  check_carrier(m, r);
  check_carrier(m, s);
  require(s <= r, Errc::OrderViolation, "minus: need s <= r");
  switch (m.kind) {
    case MonoidKind::RationalsNonneg:
    case MonoidKind::TruncatedUnitRationals:
      return Dist(r.a - s.a);
    case MonoidKind::LexPairRationals:
      // Componentwise difference in the lex-ordered group; translation
      // invariance of the order makes it both minimal and in the carrier.
      return Dist(r.a - s.a, r.b - s.b);
    case MonoidKind::UltrametricRationals:
      return r == s ? Dist(Rat(0)) : r;
  }
  fail(Errc::UnknownKind, "minus");
}

/// A nonzero t with s (+) t < r, for s < r, r != 0. Convex kinds take half
/// the residual; the max-monoid takes the midpoint of (s, r), or r/2 when
/// s = 0. Any valid witness is accepted downstream.
inline Dist standard_gap(const MonoidSpec& m, const Dist& r, const Dist& s) {
  check_carrier(m, r);
  check_carrier(m, s);
  require(!r.is_zero(), Errc::PreconditionFailed, "standard_gap: r must be nonzero");
  require(s < r, Errc::PreconditionFailed, "standard_gap: need s < r");
  switch (m.kind) {
    case MonoidKind::RationalsNonneg:
    case MonoidKind::TruncatedUnitRationals: {
      return Dist((r.a - s.a).half());
    }
    case MonoidKind::LexPairRationals:
      return Dist((r.a - s.a).half(), (r.b - s.b).half());
    case MonoidKind::UltrametricRationals:
      return s.is_zero() ? Dist(r.a.half()) : Dist((s.a + r.a).half());
  }
  fail(Errc::UnknownKind, "standard_gap");
}

/// All reduced fractions p/q with 0 <= p <= level, 1 <= q <= level,
/// intersected with [0, top] when bounded. Sorted ascending.
inline std::vector<Rat> scalar_grid(int level, const std::optional<Rat>& top = std::nullopt) {
  std::vector<Rat> out;
  for (long q = 1; q <= level; ++q)
    for (long p = 0; p <= level; ++p) {
      Rat v(p, q);
      if (top && v > *top) continue;
      out.push_back(v);
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Finite sample of the carrier: the oracle grid at the given level.
inline std::vector<Dist> grid_values(const MonoidSpec& m, int level) {
  std::vector<Dist> out;
  if (m.scalar()) {
    std::optional<Rat> top;
    if (m.bounded()) top = m.top->a;
    for (const Rat& v : scalar_grid(level, top)) out.emplace_back(v);
    return out;
  }
  // Lex pairs: first component from the grid, second signed.
  std::vector<Rat> g = scalar_grid(level);
  std::vector<Rat> signed_g;
  for (const Rat& v : g) {
    if (!v.is_zero()) signed_g.push_back(-v);
    signed_g.push_back(v);
  }
  std::sort(signed_g.begin(), signed_g.end());
  for (const Rat& x : g)
    for (const Rat& y : signed_g) {
      Dist d(x, y);
      if (in_carrier(m, d)) out.push_back(d);
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline Dist dist_parse(const MonoidSpec& m, const std::string& s) {
  if (m.scalar()) {
    Dist d(Rat::parse(s));
    check_carrier(m, d);
    return d;
  }
  auto comma = s.find(',');
  require(comma != std::string::npos, Errc::CarrierMismatch, "lex distance needs two components");
  Dist d(Rat::parse(s.substr(0, comma)), Rat::parse(s.substr(comma + 1)));
  check_carrier(m, d);
  return d;
}

}  // namespace homog
