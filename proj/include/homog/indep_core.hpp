#pragma once

#include <functional>
#include <string>

#include "homog/oligo.hpp"

namespace homog {

/// Algebraic independence: acl(A u C) and acl(B u C) meet exactly in acl(C).
inline bool alg_indep(const OligoStructure& S, const FinSet& A, const FinSet& B,
                      const FinSet& C) {
  FinSet left = S.acl(set_union(A, C));
  FinSet right = S.acl(set_union(B, C));
  return set_intersect(left, right) == S.acl(C);
}

/// An independence relation as a first-class testable object.
struct IndepRelation {
  std::string name;
  std::function<bool(const OligoStructure&, const FinSet&, const FinSet&, const FinSet&)> query;

  bool operator()(const OligoStructure& S, const FinSet& A, const FinSet& B,
                  const FinSet& C) const {
    return query(S, A, B, C);
  }
};

inline IndepRelation algebraic_independence() {
  return {"alg_indep", [](const OligoStructure& S, const FinSet& A, const FinSet& B,
                          const FinSet& C) { return alg_indep(S, A, B, C); }};
}

}  // namespace homog
