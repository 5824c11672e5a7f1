#pragma once

// Triangular layout sandwiches and the lower/upper split.

#include "rowfin/check.hpp"
#include "rowfin/matrix.hpp"

#include <utility>

namespace rowfin {

/// Row i: ones on the columns of tri_block(i).
RowFiniteMap sandwich_A(const Ring& ring);
/// Row T(i-1)+k is e_k for 1 <= k <= i.
RowFiniteMap sandwich_B(const Ring& ring);

/// Row supports inside {1..row} for rows 1..w.n; returns the first offending
/// (row, column) or nullopt.
std::optional<std::pair<Index, Index>> first_above_diagonal(const RowFiniteMap& f, Window w);
/// Row supports inside {row, row+1, ...} for rows 1..w.n.
std::optional<std::pair<Index, Index>> first_below_diagonal(const RowFiniteMap& f, Window w);

/// Diagonal X with X[T(i-1)+k, T(i-1)+k] = Y[i,k]. Throws
/// PreconditionViolation when Y is not lower-triangular on the window.
RowFiniteMap sandwich_X(const RowFiniteMap& Y, Window lower_check);

/// A X B = Y and X diagonal, on the window.
CheckList verify_sandwich(const RowFiniteMap& Y, const RowFiniteMap& X, Window w);

struct TriangularSplit {
  /// Diagonal and below.
  RowFiniteMap lower;
  /// Strictly above the diagonal.
  RowFiniteMap upper;
};

TriangularSplit upper_equiv_decompose(const RowFiniteMap& f);

}  // namespace rowfin
