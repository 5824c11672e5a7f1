#pragma once

// Exhaustive subring census in M_n(GF(p)) and the scalar-plus-first-column
// membership test.

#include "rowfin/check.hpp"
#include "rowfin/matrix.hpp"

#include <set>

namespace rowfin {

using IndexRelation = std::set<std::pair<Index, Index>>;

struct SimpleFullReport {
  std::size_t n = 0;
  std::uint64_t p = 0;
  /// One relation per subring containing the diagonal, sorted.
  std::vector<IndexRelation> relations;
  std::vector<std::size_t> dimensions;
  CheckList checks;
};

/// Every subring of M_n(GF(p)) that contains all diagonal matrices, found by
/// closing the diagonal under one extra element at a time. For each, the
/// relation of its nonzero positions must be a preorder rho with the subring
/// equal to E(rho). Requires p prime and p^(n^2) <= 2^16 (BoundExceeded).
SimpleFullReport simple_full_check(std::size_t n, std::uint64_t p);

/// All reflexive transitive relations on {1..n}, by brute force over every
/// relation.
std::vector<IndexRelation> preorders_on(std::size_t n);

struct CMembership {
  bool member = false;
  /// Scalar part s, read from entry (2,2) (zero on a 1-row window).
  Element s;
  /// f - s*1; supported in column 1 on the window when member.
  RowFiniteMap h;
  std::optional<std::pair<Index, Index>> violation;
};

/// Whether f = s*1 + (matrix supported in column 1) on rows 1..w.n.
CMembership c_membership(const RowFiniteMap& f, Window w);

/// Columns hit by rows 1..w.n.
IndexSet column_support(const RowFiniteMap& f, Window w);

/// Rows 1..w.n use only the given columns.
bool in_finite_columns(const RowFiniteMap& h, Window w, const IndexSet& columns);

}  // namespace rowfin
