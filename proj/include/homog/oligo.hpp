#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "homog/error.hpp"
#include "homog/prng.hpp"
#include "homog/rational.hpp"

namespace homog {

enum class OligoKind {
  PureSet,
  DenseOrder,
  VecFq,
  CopiesKn,
  RandomGraph,
  RandomBipartite,
  AffineFq,  // regression fixture: same carrier as VecFq, affine symmetries
};

inline const char* oligo_kind_name(OligoKind k) {
  switch (k) {
    case OligoKind::PureSet: return "pure_set";
    case OligoKind::DenseOrder: return "dense_order";
    case OligoKind::VecFq: return "vec_fq";
    case OligoKind::CopiesKn: return "copies_kn";
    case OligoKind::RandomGraph: return "random_graph";
    case OligoKind::RandomBipartite: return "random_bipartite";
    case OligoKind::AffineFq: return "affine_fq";
  }
  return "?";
}

using Elem = std::uint32_t;
using FinTuple = std::vector<Elem>;
using FinSet = std::vector<Elem>;  // kept sorted and unique

inline FinSet as_set(FinTuple t) {
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return t;
}

inline FinSet set_union(const FinSet& a, const FinSet& b) {
  FinSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline FinSet set_intersect(const FinSet& a, const FinSet& b) {
  FinSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline bool set_contains(const FinSet& a, Elem e) {
  return std::binary_search(a.begin(), a.end(), e);
}

inline bool subset_of(const FinSet& a, const FinSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

/// A concrete homogeneous structure with an on-demand finite universe.
/// Universes only ever grow, deterministically, and element ids are stable,
/// so all answers are about the countable limit structure.
class OligoStructure {
 public:
  static OligoStructure pure_set(std::size_t initial = 8) {
    OligoStructure s(OligoKind::PureSet);
    s.count_ = initial;
    return s;
  }
  static OligoStructure dense_order() {
    OligoStructure s(OligoKind::DenseOrder);
    s.vals_ = {Rat(0), Rat(1), Rat(2), Rat(3)};
    return s;
  }
  static OligoStructure vec_fq(int q, int dim = 3) {
    require(q == 2 || q == 3 || q == 5, Errc::UnknownKind, "vec_fq supports prime q in {2,3,5}");
    OligoStructure s(OligoKind::VecFq);
    s.q_ = q;
    s.dim_ = dim;
    return s;
  }
  static OligoStructure affine_fq(int q, int dim = 3) {
    require(q == 2 || q == 3 || q == 5, Errc::UnknownKind, "affine_fq supports prime q in {2,3,5}");
    OligoStructure s(OligoKind::AffineFq);
    s.q_ = q;
    s.dim_ = dim;
    return s;
  }
  static OligoStructure copies_kn(int n, int copies = 5) {
    require(n >= 1, Errc::UnknownKind, "copies_kn needs n >= 1");
    OligoStructure s(OligoKind::CopiesKn);
    s.n_ = n;
    s.copies_ = copies;
    return s;
  }
  static OligoStructure random_graph() {
    OligoStructure s(OligoKind::RandomGraph);
    s.adj_.push_back({});
    s.sides_.push_back(0);
    for (int i = 0; i < 5; ++i) s.grow();
    return s;
  }
  static OligoStructure random_bipartite() {
    OligoStructure s(OligoKind::RandomBipartite);
    s.adj_.push_back({});
    s.sides_.push_back(0);
    s.adj_.push_back({});
    s.sides_.push_back(1);
    for (int i = 0; i < 5; ++i) s.grow();
    return s;
  }

  OligoKind kind() const { return kind_; }
  int q() const { return q_; }
  int n() const { return n_; }
  int dim() const { return dim_; }

  std::size_t universe_size() const {
    switch (kind_) {
      case OligoKind::PureSet: return count_;
      case OligoKind::DenseOrder: return vals_.size();
      case OligoKind::VecFq:
      case OligoKind::AffineFq: {
        std::size_t n = 1;
        for (int i = 0; i < dim_; ++i) n *= std::size_t(q_);
        return n;
      }
      case OligoKind::CopiesKn: return std::size_t(copies_) * n_;
      case OligoKind::RandomGraph:
      case OligoKind::RandomBipartite: return adj_.size();
    }
    return 0;
  }

  /// One deterministic growth step of the truncation.
  void grow() {
    switch (kind_) {
      case OligoKind::PureSet: count_ += 8; return;
      case OligoKind::DenseOrder: {
        // midpoints and third-points in every gap, plus new endpoints
        std::vector<Rat> sorted = vals_;
        std::sort(sorted.begin(), sorted.end());
        std::vector<Rat> add;
        add.push_back(sorted.front() - Rat(1));
        add.push_back(sorted.back() + Rat(1));
        for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
          add.push_back((sorted[i] + sorted[i + 1]).half());
          add.push_back((sorted[i] + sorted[i] + sorted[i + 1]) / Rat(3));
        }
        for (const Rat& v : add) order_insert(v);
        return;
      }
      case OligoKind::VecFq:
      case OligoKind::AffineFq: {
        int max_dim = q_ == 2 ? 28 : (q_ == 3 ? 17 : 12);  // keep ids in 32 bits
        require(dim_ < max_dim, Errc::BudgetExceeded, "vector dimension limit reached");
        ++dim_;
        return;
      }
      case OligoKind::CopiesKn: copies_ += 2; return;
      case OligoKind::RandomGraph:
      case OligoKind::RandomBipartite: {
        ++glevel_;
        std::size_t pfx = std::min<std::size_t>(adj_.size(), std::size_t(glevel_));
        int side_lo = 0, side_hi = kind_ == OligoKind::RandomBipartite ? 1 : 0;
        for (int side = side_lo; side <= side_hi; ++side) {
          std::vector<Elem> pool;  // vertices a new side-`side` vertex may touch
          for (Elem v = 0; v < pfx; ++v)
            if (kind_ == OligoKind::RandomGraph || sides_[v] != side) pool.push_back(v);
          if (pool.size() > 14) pool.resize(14);
          for (std::uint32_t mask = 0; mask < (1u << pool.size()); ++mask) {
            FinSet nbrs;
            for (std::size_t i = 0; i < pool.size(); ++i)
              if (mask & (1u << i)) nbrs.push_back(pool[i]);
            bool found = false;
            for (Elem w = Elem(pfx); w < adj_.size() && !found; ++w) {
              if (kind_ == OligoKind::RandomBipartite && sides_[w] != side) continue;
              FinSet got;
              for (Elem v : pool)
                if (adjacent(w, v)) got.push_back(v);
              found = (got == nbrs);
            }
            if (!found) graph_add_vertex(side, nbrs);
          }
        }
        return;
      }
    }
  }

  void ensure_size(std::size_t n) {
    int guard = 0;
    while (universe_size() < n) {
      grow();
      require(++guard < 64, Errc::BudgetExceeded, "ensure_size runaway");
    }
  }

  // --- kind-specific raw structure ---------------------------------------

  const Rat& order_value(Elem e) const { return vals_.at(e); }

  Elem order_insert(const Rat& v) {
    for (std::size_t i = 0; i < vals_.size(); ++i)
      if (vals_[i] == v) return Elem(i);
    vals_.push_back(v);
    return Elem(vals_.size() - 1);
  }

  bool adjacent(Elem u, Elem v) const {
    if (u == v) return false;
    if (kind_ == OligoKind::CopiesKn) return u / n_ == v / n_;
    const FinSet& nu = adj_.at(u);
    return std::binary_search(nu.begin(), nu.end(), v);
  }

  int side_of(Elem v) const { return sides_.at(v); }
  int copy_of(Elem v) const { return int(v / n_); }

  /// Fresh graph vertex with exactly the given neighbors (on-demand type
  /// realization; neighbors must be on the other side for bipartite kinds).
  Elem graph_add_vertex(int side, const FinSet& nbrs) {
    require(kind_ == OligoKind::RandomGraph || kind_ == OligoKind::RandomBipartite,
            Errc::UnknownKind, "graph_add_vertex on a non-graph structure");
    for (Elem v : nbrs) {
      require(v < adj_.size(), Errc::UnknownPoint, "unknown neighbor");
      if (kind_ == OligoKind::RandomBipartite)
        require(sides_[v] != side, Errc::PreconditionFailed, "bipartite edges must cross sides");
    }
    Elem w = Elem(adj_.size());
    adj_.push_back(nbrs);
    sides_.push_back(side);
    for (Elem v : nbrs) {
      adj_[v].push_back(w);
      std::sort(adj_[v].begin(), adj_[v].end());
    }
    return w;
  }

  // Vector arithmetic on encoded elements (base-q digits = coordinates).
  Elem vec_add(Elem u, Elem v) const {
    Elem out = 0, mult = 1;
    for (int i = 0; i < dim_; ++i) {
      int du = int(u % q_), dv = int(v % q_);
      out += Elem((du + dv) % q_) * mult;
      u /= q_;
      v /= q_;
      mult *= q_;
    }
    return out;
  }
  Elem vec_scale(int c, Elem u) const {
    c %= q_;
    if (c < 0) c += q_;
    Elem out = 0, mult = 1;
    for (int i = 0; i < dim_; ++i) {
      out += Elem((c * int(u % q_)) % q_) * mult;
      u /= q_;
      mult *= q_;
    }
    return out;
  }
  Elem vec_neg(Elem u) const { return vec_scale(q_ - 1, u); }
  Elem vec_basis(int i) const {
    Elem mult = 1;
    for (int k = 0; k < i; ++k) mult *= q_;
    return mult;
  }
  int vec_coord(Elem u, int i) const {
    for (int k = 0; k < i; ++k) u /= q_;
    return int(u % q_);
  }

  /// Span of A, including 0. Enumerated exactly.
  FinSet vec_span(const FinSet& A) const {
    FinSet span = {0};
    for (Elem a : A) {
      if (set_contains(span, a)) continue;
      FinSet next = span;
      for (Elem s : span)
        for (int c = 1; c < q_; ++c) next.push_back(vec_add(s, vec_scale(c, a)));
      span = as_set(std::move(next));
    }
    return span;
  }

  /// Affine hull of A (empty for empty A).
  FinSet affine_hull(const FinSet& A) const {
    if (A.empty()) return {};
    Elem a0 = A.front();
    FinSet diffs;
    for (Elem a : A) diffs.push_back(vec_add(a, vec_neg(a0)));
    FinSet span = vec_span(as_set(std::move(diffs)));
    FinSet out;
    for (Elem s : span) out.push_back(vec_add(a0, s));
    return as_set(std::move(out));
  }

  // --- algebraic closure and orbit equivalence ----------------------------

  /// Formulaic algebraic closure: span (vec), affine hull (affine), whole
  /// copies (copies_kn), the set itself otherwise.
  FinSet acl(const FinSet& A) const {
    check_elems(A);
    switch (kind_) {
      case OligoKind::PureSet:
      case OligoKind::DenseOrder:
      case OligoKind::RandomGraph:
      case OligoKind::RandomBipartite: return A;
      case OligoKind::VecFq: return vec_span(A);
      case OligoKind::AffineFq: return affine_hull(A);
      case OligoKind::CopiesKn: {
        FinSet out;
        for (Elem a : A)
          for (int i = 0; i < n_; ++i) out.push_back(Elem(copy_of(a) * n_ + i));
        return as_set(std::move(out));
      }
    }
    return A;
  }

  FinSet acl_tuple(const FinTuple& t) const { return acl(as_set(t)); }
  bool acl_closed(const FinSet& A) const { return acl(A) == A; }

  /// Membership in acl(A) without materializing it (rank tests for the
  /// vector kinds, so large spans stay cheap).
  bool acl_contains(const FinSet& A, Elem e) const {
    switch (kind_) {
      case OligoKind::PureSet:
      case OligoKind::DenseOrder:
      case OligoKind::RandomGraph:
      case OligoKind::RandomBipartite: return set_contains(A, e);
      case OligoKind::CopiesKn: {
        for (Elem a : A)
          if (copy_of(a) == copy_of(e)) return true;
        return false;
      }
      case OligoKind::VecFq: return vec_in_span(A, e);
      case OligoKind::AffineFq: {
        if (A.empty()) return false;
        Elem a0 = A.front();
        FinSet diffs;
        for (Elem a : A) diffs.push_back(vec_add(a, vec_neg(a0)));
        return vec_in_span(as_set(std::move(diffs)), vec_add(e, vec_neg(a0)));
      }
    }
    return false;
  }

  /// The image of `target` forced by linearity (or affinity) when it depends
  /// on the sources: solve target = sum lambda_i srcs_i and push the
  /// coefficients through the images. nullopt when target is independent.
  std::optional<Elem> vec_forced_image(const FinTuple& srcs, const FinTuple& dsts,
                                       Elem target) const {
    const bool affine = kind_ == OligoKind::AffineFq;
    const int k = int(srcs.size());
    const int rows = dim_ + (affine ? 1 : 0);
    // augmented system: columns are the sources, rhs the target
    std::vector<std::vector<int>> M(rows, std::vector<int>(k + 1, 0));
    for (int j = 0; j < k; ++j) {
      for (int i = 0; i < dim_; ++i) M[i][j] = vec_coord(srcs[j], i);
      if (affine) M[dim_][j] = 1;
    }
    for (int i = 0; i < dim_; ++i) M[i][k] = vec_coord(target, i);
    if (affine) M[dim_][k] = 1;
    std::vector<int> pivot_col(rows, -1);
    int r = 0;
    for (int c = 0; c < k && r < rows; ++c) {
      int pr = -1;
      for (int i = r; i < rows; ++i)
        if (M[i][c] % q_ != 0) {
          pr = i;
          break;
        }
      if (pr < 0) continue;
      std::swap(M[r], M[pr]);
      int inv = mod_inverse(M[r][c]);
      for (int j = 0; j <= k; ++j) M[r][j] = mod(M[r][j] * inv);
      for (int i = 0; i < rows; ++i) {
        if (i == r || M[i][c] == 0) continue;
        int f = M[i][c];
        for (int j = 0; j <= k; ++j) M[i][j] = mod(M[i][j] - f * M[r][j]);
      }
      pivot_col[r] = c;
      ++r;
    }
    for (int i = r; i < rows; ++i)
      if (M[i][k] != 0) return std::nullopt;  // inconsistent: target independent
    std::vector<int> lambda(k, 0);
    for (int i = 0; i < r; ++i) lambda[pivot_col[i]] = M[i][k];
    Elem img = 0;
    for (int j = 0; j < k; ++j) img = vec_add(img, vec_scale(lambda[j], dsts[j]));
    return img;
  }

  /// e in span(A), by Gaussian elimination on coordinates.
  bool vec_in_span(const FinSet& A, Elem e) const {
    std::vector<Elem> basis;
    auto reduce = [&](Elem v) {
      for (Elem b : basis) {
        int lead = -1;
        for (int i = dim_ - 1; i >= 0; --i)
          if (vec_coord(b, i) != 0) {
            lead = i;
            break;
          }
        if (lead < 0) continue;
        int c = vec_coord(v, lead);
        if (c != 0) {
          int inv = mod_inverse(vec_coord(b, lead));
          v = vec_add(v, vec_neg(vec_scale(mod(c * inv), b)));
        }
      }
      return v;
    };
    for (Elem a : A) {
      Elem r = reduce(a);
      if (r != 0) basis.push_back(r);
    }
    return reduce(e) == 0;
  }

  /// Same-orbit test for equal-length tuples under the full symmetry group.
  bool orbit_eq(const FinTuple& u, const FinTuple& v) const {
    require(u.size() == v.size(), Errc::LengthMismatch, "orbit_eq needs equal lengths");
    check_elems(u);
    check_elems(v);
    const std::size_t k = u.size();
    switch (kind_) {
      case OligoKind::PureSet: break;  // equality pattern below
      case OligoKind::DenseOrder:
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = i + 1; j < k; ++j)
            if (order_value(u[i]).cmp(order_value(u[j])) !=
                order_value(v[i]).cmp(order_value(v[j])))
              return false;
        return true;
      case OligoKind::VecFq: return kernel_rref(u, false) == kernel_rref(v, false);
      case OligoKind::AffineFq: return kernel_rref(u, true) == kernel_rref(v, true);
      case OligoKind::CopiesKn:
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = i + 1; j < k; ++j) {
            if ((u[i] == u[j]) != (v[i] == v[j])) return false;
            if ((copy_of(u[i]) == copy_of(u[j])) != (copy_of(v[i]) == copy_of(v[j])))
              return false;
          }
        return true;
      case OligoKind::RandomGraph:
      case OligoKind::RandomBipartite:
        for (std::size_t i = 0; i < k; ++i) {
          if (kind_ == OligoKind::RandomBipartite && side_of(u[i]) != side_of(v[i])) return false;
          for (std::size_t j = i + 1; j < k; ++j) {
            if ((u[i] == u[j]) != (v[i] == v[j])) return false;
            if (adjacent(u[i], u[j]) != adjacent(v[i], v[j])) return false;
          }
        }
        return true;
    }
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j)
        if ((u[i] == u[j]) != (v[i] == v[j])) return false;
    return true;
  }

  /// u and v lie in the same orbit over the pointwise stabilizer of ctx.
  bool orbit_eq_over(const FinTuple& u, const FinTuple& v, const FinTuple& ctx) const {
    FinTuple uu = u, vv = v;
    uu.insert(uu.end(), ctx.begin(), ctx.end());
    vv.insert(vv.end(), ctx.begin(), ctx.end());
    return orbit_eq(uu, vv);
  }

  /// [a] = acl(a) intersected with the orbit of a.
  FinSet sim_class(Elem a) const {
    FinSet out;
    for (Elem b : acl({a}))
      if (orbit_eq({a}, {b})) out.push_back(b);
    return as_set(std::move(out));
  }

  // --- element names (CLI / reports) --------------------------------------

  std::string elem_name(Elem e) const {
    if (kind_ == OligoKind::VecFq || kind_ == OligoKind::AffineFq) {
      std::string out;
      for (int i = 0; i < dim_; ++i) {
        int c = vec_coord(e, i);
        if (c == 0) continue;
        if (!out.empty()) out += "+";
        if (c > 1) out += std::to_string(c);
        out += "e" + std::to_string(i + 1);
      }
      return out.empty() ? "0" : out;
    }
    if (kind_ == OligoKind::DenseOrder) return order_value(e).str();
    return std::to_string(e);
  }

  Elem elem_parse(const std::string& s) {
    if (kind_ == OligoKind::VecFq || kind_ == OligoKind::AffineFq) {
      if (s == "0") return 0;
      Elem acc = 0;
      std::size_t pos = 0;
      while (pos < s.size()) {
        std::size_t next = s.find('+', pos);
        if (next == std::string::npos) next = s.size();
        std::string term = s.substr(pos, next - pos);
        int coef = 1;
        std::size_t epos = term.find('e');
        require(epos != std::string::npos, Errc::UsageError, "bad vector term '" + term + "'");
        if (epos > 0) coef = std::stoi(term.substr(0, epos));
        int idx = std::stoi(term.substr(epos + 1));
        require(idx >= 1, Errc::UsageError, "basis indices start at e1");
        while (idx > dim_) grow();
        acc = vec_add(acc, vec_scale(coef, vec_basis(idx - 1)));
        pos = next + 1;
      }
      return acc;
    }
    if (kind_ == OligoKind::DenseOrder) return order_insert(Rat::parse(s));
    Elem e = Elem(std::stoul(s));
    ensure_size(e + 1);
    return e;
  }

  void check_elems(const FinTuple& t) const {
    for (Elem e : t)
      require(e < universe_size(), Errc::UnknownPoint, "element outside truncation");
  }

 private:
  explicit OligoStructure(OligoKind k) : kind_(k) {}

  /// Canonical basis (RREF) of the kernel {lambda : sum lambda_i u_i = 0};
  /// with `affine`, vectors are lifted by a constant-1 coordinate so the
  /// kernel captures exactly the zero-sum dependencies.
  std::vector<std::vector<int>> kernel_rref(const FinTuple& u, bool affine) const {
    const int k = int(u.size());
    const int rows = dim_ + (affine ? 1 : 0);
    // matrix M: rows are coordinates, columns the tuple entries
    std::vector<std::vector<int>> M(rows, std::vector<int>(k, 0));
    for (int j = 0; j < k; ++j) {
      for (int i = 0; i < dim_; ++i) M[i][j] = vec_coord(u[j], i);
      if (affine) M[dim_][j] = 1;
    }
    // Gaussian elimination over F_q to find pivot columns.
    std::vector<int> pivot_col(rows, -1);
    int r = 0;
    std::vector<bool> is_pivot(k, false);
    for (int c = 0; c < k && r < rows; ++c) {
      int pr = -1;
      for (int i = r; i < rows; ++i)
        if (M[i][c] % q_ != 0) {
          pr = i;
          break;
        }
      if (pr < 0) continue;
      std::swap(M[r], M[pr]);
      int inv = mod_inverse(M[r][c]);
      for (int j = 0; j < k; ++j) M[r][j] = mod(M[r][j] * inv);
      for (int i = 0; i < rows; ++i) {
        if (i == r || M[i][c] == 0) continue;
        int f = M[i][c];
        for (int j = 0; j < k; ++j) M[i][j] = mod(M[i][j] - f * M[r][j]);
      }
      pivot_col[r] = c;
      is_pivot[c] = true;
      ++r;
    }
    // Kernel basis: one vector per free column, canonical form.
    std::vector<std::vector<int>> kernel;
    for (int c = 0; c < k; ++c) {
      if (is_pivot[c]) continue;
      std::vector<int> vec(k, 0);
      vec[c] = 1;
      for (int i = 0; i < r; ++i) vec[pivot_col[i]] = mod(-M[i][c]);
      kernel.push_back(std::move(vec));
    }
    return kernel;
  }

  int mod(int x) const {
    x %= q_;
    return x < 0 ? x + q_ : x;
  }
  int mod_inverse(int x) const {
    x = mod(x);
    for (int y = 1; y < q_; ++y)
      if (mod(x * y) == 1) return y;
    fail(Errc::PreconditionFailed, "no inverse mod q");
  }

  OligoKind kind_;
  int q_ = 0, n_ = 0, dim_ = 0;
  std::size_t count_ = 0;       // PureSet
  std::vector<Rat> vals_;       // DenseOrder
  int copies_ = 0;              // CopiesKn
  std::vector<FinSet> adj_;     // graphs
  std::vector<int> sides_;      // graphs (all 0 for random_graph)
  int glevel_ = 0;              // graph growth level
};

// --- partial group elements ------------------------------------------------

/// A group element given as a finite partial map plus the back-and-forth
/// extension rule. Valid iff source and image tuples are orbit equivalent.
struct PartialAut {
  std::vector<std::pair<Elem, Elem>> pairs;  // sorted by source

  static PartialAut identity_on(const FinSet& A) {
    PartialAut g;
    for (Elem a : A) g.pairs.emplace_back(a, a);
    return g;
  }

  std::optional<Elem> apply(Elem e) const {
    auto it = std::lower_bound(pairs.begin(), pairs.end(), std::make_pair(e, Elem(0)),
                               [](const auto& x, const auto& y) { return x.first < y.first; });
    if (it != pairs.end() && it->first == e) return it->second;
    return std::nullopt;
  }
  bool in_domain(Elem e) const { return apply(e).has_value(); }

  FinTuple sources() const {
    FinTuple t;
    for (const auto& [a, b] : pairs) t.push_back(a);
    return t;
  }
  FinTuple images() const {
    FinTuple t;
    for (const auto& [a, b] : pairs) t.push_back(b);
    return t;
  }
  FinTuple apply_tuple(const FinTuple& t) const {
    FinTuple out;
    for (Elem e : t) {
      auto v = apply(e);
      require(v.has_value(), Errc::DomainMismatch, "element outside partial map domain");
      out.push_back(*v);
    }
    return out;
  }

  PartialAut inverse() const {
    PartialAut g;
    for (const auto& [a, b] : pairs) g.pairs.emplace_back(b, a);
    std::sort(g.pairs.begin(), g.pairs.end());
    return g;
  }

  void set(Elem src, Elem dst) {
    pairs.emplace_back(src, dst);
    std::sort(pairs.begin(), pairs.end());
  }

  bool fixes(const FinSet& A) const {
    for (Elem a : A) {
      auto v = apply(a);
      if (!v || *v != a) return false;
    }
    return true;
  }
};

inline bool is_partial_auto(const OligoStructure& S, const PartialAut& g) {
  return S.orbit_eq(g.sources(), g.images());
}

/// Extends a partial automorphism over `target`: target-first then
/// lowest-candidate tie-breaking, growing the truncation as needed. The
/// acceptance test for a candidate is orbit equivalence of the extended map.
inline PartialAut extend_automorphism(OligoStructure& S, const PartialAut& g, Elem target,
                                      int budget = 20000,
                                      const std::function<bool(Elem)>& allow = nullptr,
                                      Elem scan_from = 0, int grow_cap = 12) {
  require(is_partial_auto(S, g), Errc::PreconditionFailed, "not a partial automorphism");
  if (g.in_domain(target)) return g;
  FinTuple src = g.sources(), dst = g.images();
  src.push_back(target);
  FinSet used = as_set(dst);
  auto try_cand = [&](Elem cand) -> bool {
    if (set_contains(used, cand)) return false;
    if (allow && !allow(cand)) return false;
    FinTuple d2 = dst;
    d2.push_back(cand);
    return S.orbit_eq(src, d2);
  };
  int tried = 0;
  int growths = 0;
  if ((S.kind() == OligoKind::VecFq || S.kind() == OligoKind::AffineFq) && !g.pairs.empty()) {
    // dependent targets have a unique image; compute it directly
    if (auto forced = S.vec_forced_image(g.sources(), g.images(), target)) {
      require(!allow || allow(*forced), Errc::BudgetExceeded,
              "forced image rejected by the candidate filter");
      FinTuple d2 = dst;
      d2.push_back(*forced);
      require(S.orbit_eq(src, d2), Errc::BudgetExceeded, "forced image inconsistent");
      PartialAut out = g;
      out.set(target, *forced);
      return out;
    }
  }
  if (target < S.universe_size() && try_cand(target)) {
    PartialAut out = g;
    out.set(target, target);
    return out;
  }
  Elem cand = scan_from;
  Elem wrapped_end = scan_from;  // after growing past the end, wrap to [0, scan_from)
  bool wrapped = false;
  while (true) {
    if (!wrapped && cand >= S.universe_size()) {
      if (growths < grow_cap) {
        ++growths;
        S.grow();
      } else if (scan_from > 0) {
        wrapped = true;
        cand = 0;
      } else {
        fail(Errc::BudgetExceeded, "extend_automorphism: growth budget");
      }
      continue;
    }
    if (wrapped && cand >= wrapped_end) fail(Errc::BudgetExceeded, "extend_automorphism: no candidate");
    require(++tried <= budget, Errc::BudgetExceeded, "extend_automorphism: candidate budget");
    if (try_cand(cand)) {
      PartialAut out = g;
      out.set(target, cand);
      return out;
    }
    ++cand;
  }
}

/// Seeded variant: picks uniformly among valid candidates in the current
/// truncation (used to sample stabilizer elements).
inline PartialAut extend_automorphism_random(OligoStructure& S, const PartialAut& g, Elem target,
                                             SplitMix64& rng, int tries = 64) {
  require(is_partial_auto(S, g), Errc::PreconditionFailed, "not a partial automorphism");
  if (g.in_domain(target)) return g;
  FinTuple src = g.sources(), dst = g.images();
  src.push_back(target);
  FinSet used = as_set(dst);
  std::size_t n = S.universe_size();
  for (int t = 0; t < tries; ++t) {
    Elem cand = Elem(rng.below(n));
    if (set_contains(used, cand)) continue;
    FinTuple d2 = dst;
    d2.push_back(cand);
    if (S.orbit_eq(src, d2)) {
      PartialAut out = g;
      out.set(target, cand);
      return out;
    }
  }
  // deterministic fallback
  return extend_automorphism(S, g, target);
}

/// Neumann-style witness: g fixes C pointwise, g(D) is C-conjugate to D, and
/// g(D) meets B only inside C n D n B.
inline PartialAut neumann_witness(OligoStructure& S, const FinSet& C, const FinSet& D,
                                  const FinSet& B, int budget = 20000) {
  require(S.acl_closed(C), Errc::NotAclClosed, "C must be algebraically closed");
  PartialAut g = PartialAut::identity_on(C);
  FinSet cdb = set_intersect(set_intersect(C, D), B);
  bool trivial = subset_of(D, C);
  // Fresh elements (beyond the current truncation) cannot meet B, and their
  // forced combinations stay fresh too, so scan from there.
  Elem fresh = trivial ? Elem(0) : Elem(S.universe_size());
  if (!trivial) S.grow();
  for (Elem d : D) {
    if (g.in_domain(d)) continue;
    auto allow = [&](Elem cand) { return !set_contains(B, cand); };
    g = extend_automorphism(S, g, d, budget, allow, fresh);
  }
  // postconditions, checked exactly
  require(g.fixes(C), Errc::PreconditionFailed, "witness does not fix C");
  FinTuple dt(D.begin(), D.end());
  require(S.orbit_eq_over(dt, g.apply_tuple(dt), FinTuple(C.begin(), C.end())),
          Errc::PreconditionFailed, "witness image not C-conjugate");
  FinSet gD = as_set(g.apply_tuple(dt));
  require(set_intersect(gD, B) == cdb, Errc::PreconditionFailed, "witness intersection wrong");
  return g;
}

// --- self-embedding prefixes ---------------------------------------------

/// Explored prefix of a self-embedding of the structure.
struct OligoEmbPrefix {
  std::vector<std::pair<Elem, Elem>> pairs;

  std::optional<Elem> apply(Elem e) const {
    for (const auto& [a, b] : pairs)
      if (a == e) return b;
    return std::nullopt;
  }
  FinTuple sources() const {
    FinTuple t;
    for (const auto& [a, b] : pairs) t.push_back(a);
    return t;
  }
  FinTuple images() const {
    FinTuple t;
    for (const auto& [a, b] : pairs) t.push_back(b);
    return t;
  }
};

/// Extends an embedding prefix over `e` with the lowest valid image
/// (optionally filtered), growing the structure when no candidate exists.
inline void emb_prefix_extend(OligoStructure& S, OligoEmbPrefix& p, Elem e,
                              const std::function<bool(Elem)>& allow = nullptr,
                              int budget = 20000, Elem scan_from = 0, int grow_cap = 12) {
  if (p.apply(e)) return;
  FinTuple src = p.sources(), dst = p.images();
  src.push_back(e);
  FinSet used = as_set(dst);
  int growths = 0, tried = 0;
  Elem cand = scan_from;
  bool wrapped = false;
  while (true) {
    if (!wrapped && cand >= S.universe_size()) {
      if (growths < grow_cap) {
        ++growths;
        S.grow();
      } else if (scan_from > 0) {
        wrapped = true;
        cand = 0;
      } else {
        fail(Errc::BudgetExceeded, "emb_prefix_extend: growth budget");
      }
      continue;
    }
    if (wrapped && cand >= scan_from) fail(Errc::BudgetExceeded, "emb_prefix_extend: no candidate");
    require(++tried <= budget, Errc::BudgetExceeded, "emb_prefix_extend: candidate budget");
    bool viable = !set_contains(used, cand) && (!allow || allow(cand));
    if (viable) {
      FinTuple d2 = dst;
      d2.push_back(cand);
      if (S.orbit_eq(src, d2)) {
        p.pairs.emplace_back(e, cand);
        return;
      }
    }
    ++cand;
  }
}

enum class InvariantSet { Empty, BipartiteLeft };

/// Two embedding prefixes agreeing on the tagged invariant set and
/// differing at `a`. Precondition: the definable closure of the invariant
/// set misses a's orbit (checked for the shipped combinations).
inline std::pair<OligoEmbPrefix, OligoEmbPrefix> agreeing_pair(OligoStructure& S, InvariantSet X,
                                                               Elem a, int depth) {
  if (X == InvariantSet::BipartiteLeft) {
    require(S.kind() == OligoKind::RandomBipartite, Errc::PreconditionFailed,
            "BipartiteLeft tag needs the random bipartite graph");
    require(S.side_of(a) == 1, Errc::PreconditionFailed, "a must lie outside the invariant side");
  } else {
    bool a_definable = (S.kind() == OligoKind::VecFq && a == 0);
    require(!a_definable, Errc::PreconditionFailed, "a lies in dcl of the empty set");
  }
  auto in_X = [&](Elem e) {
    return X == InvariantSet::BipartiteLeft && S.side_of(e) == 0;
  };
  OligoEmbPrefix alpha, beta;
  std::vector<Elem> domain;
  for (Elem e = 0; e < S.universe_size() && domain.size() + 1 < std::size_t(depth); ++e)
    if (e != a) domain.push_back(e);
  domain.push_back(a);
  for (Elem e : domain) {
    alpha.pairs.emplace_back(e, e);
    if (in_X(e)) {
      beta.pairs.emplace_back(e, e);
    } else if (e == a) {
      emb_prefix_extend(S, beta, e, [&](Elem cand) { return cand != a; });
    } else {
      emb_prefix_extend(S, beta, e);
    }
  }
  return {alpha, beta};
}

/// Two embedding prefixes agreeing on the acl-closed set X whose explored
/// images meet only in X.
inline std::pair<OligoEmbPrefix, OligoEmbPrefix> image_disjoint_pair(OligoStructure& S,
                                                                     const FinSet& X, int depth) {
  require(S.acl_closed(X), Errc::NotAclClosed, "X must be algebraically closed");
  OligoEmbPrefix alpha, beta;
  std::vector<Elem> domain;
  for (Elem x : X) domain.push_back(x);
  for (Elem e = 0; e < S.universe_size() && domain.size() < std::size_t(depth) + X.size(); ++e)
    if (!set_contains(X, e)) domain.push_back(e);
  FinSet alpha_img;  // alpha is the identity prefix
  for (Elem e : domain) {
    alpha.pairs.emplace_back(e, e);
    alpha_img.push_back(e);
  }
  alpha_img = as_set(std::move(alpha_img));
  for (Elem e : domain) {
    if (set_contains(X, e)) {
      beta.pairs.emplace_back(e, e);
      continue;
    }
    // Fresh elements first: free choices then live in fresh territory, so
    // their forced combinations cannot collide with alpha's image either.
    emb_prefix_extend(S, beta, e, [&](Elem cand) { return !set_contains(alpha_img, cand); },
                      20000, Elem(S.universe_size()), 2);
  }
  return {alpha, beta};
}

// --- independent brute-force closure oracle --------------------------------

namespace detail_oligo {

/// Raw structural compatibility of the map (id on A, b -> b2), using only the
/// structure's primitive relations and operations, never acl or orbit_eq.
inline bool raw_move_valid(const OligoStructure& S, const FinSet& A, Elem b, Elem b2) {
  if (set_contains(A, b) || set_contains(A, b2)) return set_contains(A, b) && b == b2;
  switch (S.kind()) {
    case OligoKind::PureSet: return true;
    case OligoKind::DenseOrder:
      for (Elem a : A)
        if (S.order_value(b).cmp(S.order_value(a)) != S.order_value(b2).cmp(S.order_value(a)))
          return false;
      return true;
    case OligoKind::CopiesKn:
    case OligoKind::RandomGraph:
    case OligoKind::RandomBipartite:
      if (S.kind() == OligoKind::RandomBipartite && S.side_of(b) != S.side_of(b2)) return false;
      for (Elem a : A)
        if (S.adjacent(a, b) != S.adjacent(a, b2)) return false;
      return true;
    case OligoKind::VecFq:
    case OligoKind::AffineFq: {
      // enumerate all linear (affine) relations over A u {b} by raw vector arithmetic
      const int k = int(A.size());
      std::vector<int> lam(k + 1, 0);
      while (true) {
        int c = 0;
        while (c <= k && ++lam[c] == S.q()) lam[c++] = 0;
        if (c > k) break;
        Elem sb = 0, sb2 = 0;
        int coefsum = 0;
        for (int i = 0; i < k; ++i) {
          sb = S.vec_add(sb, S.vec_scale(lam[i], A[i]));
          coefsum += lam[i];
        }
        sb2 = sb;
        sb = S.vec_add(sb, S.vec_scale(lam[k], b));
        sb2 = S.vec_add(sb2, S.vec_scale(lam[k], b2));
        coefsum += lam[k];
        if (S.kind() == OligoKind::VecFq) {
          if ((sb == 0) != (sb2 == 0)) return false;
        } else {
          // affine maps preserve exactly the zero-sum dependencies
          if (coefsum % S.q() == 0 && (sb == 0) != (sb2 == 0)) return false;
        }
      }
      return true;
    }
  }
  return false;
}

inline std::size_t orbit_count_within(const OligoStructure& S, const FinSet& A, Elem b,
                                      std::size_t bound) {
  std::size_t cnt = 0;
  for (Elem b2 = 0; b2 < bound; ++b2)
    if (raw_move_valid(S, A, b, b2)) ++cnt;
  return cnt;
}

}  // namespace detail_oligo

/// Stabilizer-orbit closure computed by brute force: b lies in the closure of
/// A iff its orbit over A stops growing when the truncation grows. Uses only
/// raw structural checks; independent of the formulaic acl.
inline FinSet brute_force_acl(OligoStructure& S, const FinSet& A, std::size_t truncation) {
  S.ensure_size(truncation);
  std::size_t small = S.universe_size();
  if (S.kind() == OligoKind::RandomGraph || S.kind() == OligoKind::RandomBipartite) {
    // Graph growth deduplicates realized types, which can hide orbit growth.
    // Perform explicit legal one-point extensions instead: a fresh vertex for
    // every adjacency pattern over A (both sides for the bipartite kind).
    int side_hi = S.kind() == OligoKind::RandomBipartite ? 1 : 0;
    for (int side = 0; side <= side_hi; ++side) {
      std::vector<Elem> pool;
      for (Elem a : A)
        if (S.kind() == OligoKind::RandomGraph || S.side_of(a) != side) pool.push_back(a);
      for (std::uint32_t mask = 0; mask < (1u << pool.size()); ++mask) {
        FinSet nbrs;
        for (std::size_t i = 0; i < pool.size(); ++i)
          if (mask & (1u << i)) nbrs.push_back(pool[i]);
        S.graph_add_vertex(side, nbrs);
      }
    }
  } else {
    S.grow();
    S.grow();
  }
  std::size_t big = S.universe_size();
  require(big > small, Errc::PreconditionFailed, "truncation did not grow");
  FinSet out;
  for (Elem b = 0; b < truncation; ++b) {
    std::size_t c1 = detail_oligo::orbit_count_within(S, A, b, small);
    std::size_t c2 = detail_oligo::orbit_count_within(S, A, b, big);
    if (c1 == c2) out.push_back(b);
  }
  return out;
}

}  // namespace homog
