#pragma once

// Membership in E(rho), the D-class / E-class dichotomy, and the g S' h
// witnesses for the E-class.

#include "rowfin/check.hpp"
#include "rowfin/matrix.hpp"
#include "rowfin/preorder.hpp"

#include <functional>

namespace rowfin {

struct MembershipResult {
  bool member = true;
  /// (row, column) pairs with a nonzero entry outside rho, in row order.
  std::vector<std::pair<Index, Index>> violations;
};

/// Rows 1..w.n of f checked entry by entry against rho.
MembershipResult preorder_membership(const RowFiniteMap& f, const Preorder& rho, Window w,
                                     std::size_t max_violations = 16);

enum class Verdict { DClass, EClass };
std::string to_string(Verdict v);

struct Classification {
  Verdict verdict;
  /// DClass: the finite set of indices with infinite up-set. EClass: an
  /// enumerator of such indices.
  Support evidence;
};

/// Spot-checks the descriptor (PreconditionViolation on any problem), then
/// reads the verdict off its infinite-up-set tag.
Classification classify_preorder(const Preorder& rho, const SpotCheckBounds& bounds = {});

struct EquivWitness {
  RefinementBranch branch;
  Preorder rho;
  RowFiniteMap g;
  RowFiniteMap h;
  std::function<Index(Index)> anchor;
  /// s' in E(rho) with g s' h = target on the window. The Nested branch
  /// requires an upper-triangular target.
  std::function<RowFiniteMap(const RowFiniteMap&, Window)> lift;
};

/// Requires an E-class descriptor carrying a refinement.
EquivWitness eclass_witness(const Ring& ring, const Preorder& rho, const SpotCheckBounds& bounds = {});

/// g s' h = target on the window, and s' in E(rho) on every row the window
/// reads (anchors of rows 1..w.n).
CheckList verify_lift(const EquivWitness& ew, const RowFiniteMap& target, const RowFiniteMap& lifted, Window w);

}  // namespace rowfin
