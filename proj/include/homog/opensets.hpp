#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "homog/embedding.hpp"
#include "homog/error.hpp"
#include "homog/generator.hpp"

namespace homog {

enum class Membership { Yes, No, Inconclusive };

inline const char* membership_name(Membership m) {
  switch (m) {
    case Membership::Yes: return "yes";
    case Membership::No: return "no";
    case Membership::Inconclusive: return "inconclusive";
  }
  return "?";
}

/// Basic open sets over a generator's embedding monoid.
/// W: s(a) lands in the eps-ball of b (decided exactly).
/// O: some explored image point lands in the eps-ball of a (semi-decided).
/// Z: both translates s*sigma and s*theta meet the balls around a.
struct WSet {
  PointId a, b;
  Dist eps;
};
struct OSet {
  PointId a;
  Dist eps;
};
struct ZSet {
  PointId a;
  Dist zeta, eta;
  Embedding sigma, theta;
};
using OpenSetSpec = std::variant<WSet, OSet, ZSet>;

inline bool in_ball(const GenPtr& g, PointId x, PointId centre, const Dist& eps) {
  return g->distance(x, centre) < eps;
}

/// Bounded membership check. W answers exactly; O and Z answer yes or
/// inconclusive after exploring at most `depth` enumeration points (never a
/// false yes).
inline Membership member_bounded(const OpenSetSpec& spec, const Embedding& s, int depth) {
  GenPtr g = s.generator();
  if (const WSet* w = std::get_if<WSet>(&spec)) {
    require(!w->eps.is_zero(), Errc::ZeroEpsilon, "W needs eps != 0");
    PointId img = s.eval(w->a);
    return in_ball(g, img, w->b, w->eps) ? Membership::Yes : Membership::No;
  }
  if (const OSet* o = std::get_if<OSet>(&spec)) {
    require(!o->eps.is_zero(), Errc::ZeroEpsilon, "O needs eps != 0");
    for (const auto& [x, y] : s.explored_pairs())
      if (in_ball(g, y, o->a, o->eps)) return Membership::Yes;
    for (int i = 0; i < depth && std::size_t(i) < g->size(); ++i) {
      PointId y = s.eval(PointId(i));
      if (in_ball(g, y, o->a, o->eps)) return Membership::Yes;
    }
    return Membership::Inconclusive;
  }
  const ZSet& z = std::get<ZSet>(spec);
  require(!z.zeta.is_zero() && !z.eta.is_zero(), Errc::ZeroEpsilon, "Z needs nonzero radii");
  require(z.sigma.generator() == g && z.theta.generator() == g, Errc::GeneratorMismatch,
          "Z factors live on another generator");
  auto side = [&](const Embedding& t, const Dist& radius) {
    for (const auto& [x, q] : t.explored_pairs()) {
      if (auto img = s.image_of(q); img && in_ball(g, *img, z.a, radius)) return true;
    }
    for (int i = 0; i < depth && std::size_t(i) < g->size(); ++i) {
      PointId q = t.eval(PointId(i));
      if (in_ball(g, s.eval(q), z.a, radius)) return true;
    }
    return false;
  };
  bool zeta_side = side(z.sigma, z.zeta);
  bool eta_side = zeta_side && side(z.theta, z.eta);
  return (zeta_side && eta_side) ? Membership::Yes : Membership::Inconclusive;
}

// --- O-set characterization via a pinching pair ----------------------------

struct OCharReport {
  std::size_t samples = 0;
  std::size_t points_checked = 0;
  std::size_t points_unchecked = 0;  // image points left unevaluated (budget)
  std::size_t decided_violations = 0;
  std::size_t samples_in_O = 0;
  std::size_t samples_inconclusive = 0;
  std::vector<std::string> violation_notes;
  bool ok() const { return decided_violations == 0; }
};

/// Checks, on seeded samples, that an explored image point witnesses
/// membership in O_{a,eps} exactly when the pinching sides disagree there.
/// Per sample at most `eval_budget` image points are pushed through the
/// pinching pair; the rest are tallied as unchecked.
inline OCharReport check_O_characterization(const GenPtr& g, PointId a, const Dist& eps,
                                            std::size_t samples, int depth, std::uint64_t seed,
                                            std::size_t eval_budget = 4) {
  require(g->monoid().metrically_complete && g->monoid().standard, Errc::PreconditionFailed,
          "O characterization needs a metrically complete standard monoid");
  auto [phi, psi] = pinching_pair(g, a, eps);
  OCharReport rep;
  rep.samples = samples;
  SplitMix64 root(seed);
  // contact points inside the ball, for the pinned third of the samples
  std::vector<PointId> near_a;
  Dist t = standard_gap(g->monoid(), eps, Dist(Rat(0)));
  for (int i = 0; i < 4; ++i) {
    near_a.push_back(g->realize_type({{a}, {t}}));
    t = standard_gap(g->monoid(), t, Dist(Rat(0)));
  }
  for (std::size_t k = 0; k < samples; ++k) {
    Embedding s = (k % 3 == 0)
                      ? make_pinned_embedding(g, {{a, near_a[k / 3 % near_a.size()]}})
                      : sample_embedding(g, root.next(), std::size_t(depth));
    if (k % 3 == 0)
      for (int i = 0; i < depth && std::size_t(i) < g->size(); ++i) s.eval(PointId(i));
    bool any_in_ball = false;
    std::size_t budget = eval_budget;
    std::size_t witness_checked = 0, off_checked = 0;
    for (const auto& [x, y] : s.explored_pairs()) {
      bool in = in_ball(g, y, a, eps);
      any_in_ball |= in;
      // Spend the budget on ball points first, then a few outside ones.
      bool check = budget > 0 && (in ? true : off_checked < (eval_budget + 1) / 2);
      if (!check) {
        ++rep.points_unchecked;
        continue;
      }
      --budget;
      (in ? witness_checked : off_checked)++;
      bool disagree = phi.eval(y) != psi.eval(y);
      ++rep.points_checked;
      if (disagree != in) {
        ++rep.decided_violations;
        rep.violation_notes.push_back("sample " + std::to_string(k) + " point " +
                                      std::to_string(y) + (in ? " in ball, sides agree"
                                                              : " off ball, sides disagree"));
      }
    }
    if (any_in_ball)
      ++rep.samples_in_O;
    else
      ++rep.samples_inconclusive;
  }
  return rep;
}

// --- containment chain W ⊆ Z ⊆ W ------------------------------------------

struct ContainmentReport {
  std::size_t samples = 0;
  std::size_t w_members = 0;
  std::size_t w_to_z_confirmed = 0;
  std::size_t z_members_decided = 0;
  std::size_t z_to_w_confirmed = 0;
  std::size_t inconclusive = 0;
  std::size_t decided_counterexamples = 0;
  std::vector<std::string> notes;
  bool ok() const { return decided_counterexamples == 0; }
};

/// Samples embeddings and checks the two-sided containment between W-sets and
/// the Z-set built from a spreading pair anchored at a. Half of the samples
/// are pinned to land inside W (near b) so both inclusions get decided
/// witnesses; generic samples that stay undecided count as inconclusive.
inline ContainmentReport check_containments(const GenPtr& g, PointId a, PointId b,
                                            const Dist& zeta, const Dist& eta, const Dist& eps,
                                            std::size_t samples, int depth, std::uint64_t seed) {
  const MonoidSpec& m = g->monoid();
  require(zeta <= eta, Errc::ParameterViolation, "need zeta <= eta");
  require(plus(m, zeta, eta) <= eps, Errc::ParameterViolation, "need zeta (+) eta <= eps");
  auto [sigma, theta] = spreading_pair(g, a, eps);
  sigma.eval(a);
  theta.eval(a);

  ContainmentReport rep;
  rep.samples = samples;
  SplitMix64 root(seed);
  // Pinned W-members: realize points ever closer to b and pin s(a) there.
  Dist t = standard_gap(m, zeta, Dist(Rat(0)));
  std::vector<PointId> near_b = {b};
  for (int i = 0; i < 6; ++i) {
    near_b.push_back(g->realize_type({{b}, {t}}));
    t = standard_gap(m, t, Dist(Rat(0)));
  }

  int scan_cap = std::min(depth, 6);
  for (std::size_t k = 0; k < samples; ++k) {
    Embedding s = (k % 2 == 0)
                      ? make_pinned_embedding(g, {{a, near_b[k / 2 % near_b.size()]}})
                      : sample_embedding(g, root.next(), std::size_t(depth));
    if (k % 2 == 0)
      for (int i = 0; i < scan_cap; ++i) s.eval(PointId(i));

    bool w_in = in_ball(g, s.eval(a), b, zeta);
    if (w_in) ++rep.w_members;

    // Decide Z-membership by scanning a bounded set of explored points of
    // each spreading side (a is always included).
    auto z_witness = [&](const Embedding& side, const Dist& radius) -> std::optional<PointId> {
      if (in_ball(g, s.eval(side.eval(a)), b, radius)) return a;
      for (int i = 0; i < scan_cap && std::size_t(i) < g->size(); ++i) {
        PointId x = PointId(i);
        if (in_ball(g, s.eval(side.eval(x)), b, radius)) return x;
      }
      return std::nullopt;
    };
    auto cw = z_witness(sigma, zeta);
    auto dw = cw ? z_witness(theta, eta) : std::nullopt;
    bool z_in = cw && dw;

    if (w_in) {
      // First inclusion: a W-member must exhibit a Z-witness; the anchor a
      // itself always works because both sides fix it.
      if (z_in)
        ++rep.w_to_z_confirmed;
      else {
        ++rep.decided_counterexamples;
        rep.notes.push_back("sample " + std::to_string(k) + ": in W but Z witness missing");
      }
    }
    if (z_in) {
      ++rep.z_members_decided;
      // Second inclusion, replaying the triangle chain on the witnesses.
      PointId c = sigma.eval(*cw), d = theta.eval(*dw);
      bool chain_ok = g->distance(s.eval(c), s.eval(d)) < plus(m, zeta, eta) &&
                      g->distance(c, d) < eps && g->distance(c, a) < eps &&
                      in_ball(g, s.eval(a), b, plus(m, eps, zeta));
      if (chain_ok)
        ++rep.z_to_w_confirmed;
      else {
        ++rep.decided_counterexamples;
        rep.notes.push_back("sample " + std::to_string(k) + ": Z member escapes the outer W");
      }
    }
    if (!w_in && !z_in) ++rep.inconclusive;
  }
  return rep;
}

}  // namespace homog
