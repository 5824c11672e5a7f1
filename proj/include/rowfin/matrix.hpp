#pragma once

// Finitely supported vectors and lazy row-finite matrices acting on the right.
//
// A vector x times a matrix f is the vector sum over a of x_a * (row a of f);
// the product fg has row a equal to (row a of f) * g, so written order is
// application order. Entry products are always (left entry) * (right entry).

#include "rowfin/indexing.hpp"
#include "rowfin/ring.hpp"

#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

namespace rowfin {

/// Element of the direct sum: sorted (index, nonzero entry) pairs.
class FinVec {
 public:
  using Entry = std::pair<Index, Element>;

  FinVec() = default;
  /// Drops zeros, sorts, and rejects duplicate indices.
  FinVec(const Ring& ring, std::vector<Entry> entries);

  static FinVec unit(const Ring& ring, Index i);
  static FinVec single(const Ring& ring, Index i, Element value);

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  const std::vector<Entry>& entries() const { return entries_; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  /// Entry at index i, or nullptr when it is zero.
  const Element* find(Index i) const;
  IndexSet support() const;
  /// Largest index in the support (0 for the zero vector).
  Index max_index() const { return entries_.empty() ? 0 : entries_.back().first; }

  friend bool operator==(const FinVec&, const FinVec&) = default;

 private:
  std::vector<Entry> entries_;
};

FinVec vec_add(const Ring& ring, const FinVec& a, const FinVec& b);
FinVec vec_neg(const Ring& ring, const FinVec& a);
/// c * x (scalar on the left of every entry).
FinVec vec_scale(const Ring& ring, const Element& c, const FinVec& x);
inline IndexSet vec_support(const FinVec& x) { return x.support(); }
std::string format_vec(const Ring& ring, const FinVec& x);
/// Inverse of format_vec: `{i:v, j:w}`; braces and spaces optional, `{}` is zero.
FinVec parse_vec(const Ring& ring, std::string_view text);

/// Accumulates sparse sums, then emits a pruned FinVec.
class VecAccumulator {
 public:
  explicit VecAccumulator(const Ring& ring) : ring_(ring) {}
  void add(Index i, const Element& v);
  /// Adds c * row.
  void add_scaled(const Element& c, const FinVec& row);
  FinVec finish();

 private:
  const Ring& ring_;
  std::vector<FinVec::Entry> pending_;
};

/// Principal corner size for finite verification.
struct Window {
  Index n;
  explicit Window(Index size);
};

/// Row-finite N+ x N+ matrix given by its row function.
///
/// Rows are computed on demand and memoized. Copies share the memo table;
/// concurrent reads are safe and may compute a row twice, but only one
/// result is ever stored.
class RowFiniteMap {
 public:
  using RowFn = std::function<FinVec(Index)>;

  RowFiniteMap(Ring ring, RowFn row, std::string tag);

  const FinVec& row(Index alpha) const;
  const Ring& ring() const;
  const std::string& tag() const;
  /// Number of rows computed (memo misses) so far.
  std::size_t rows_computed() const;

 private:
  struct Node;
  std::shared_ptr<Node> node_;
};

RowFiniteMap rf_identity(const Ring& ring);
RowFiniteMap rf_zero(const Ring& ring);
/// e_ij: row i is e_j, every other row is zero.
RowFiniteMap rf_matrix_unit(const Ring& ring, Index i, Index j);
/// pi_Sigma: row a is e_a when a is in Sigma, zero otherwise.
RowFiniteMap rf_projection(const Ring& ring, std::function<bool(Index)> sigma, std::string label = "Sigma");
/// Constant diagonal matrix with entry c.
RowFiniteMap rf_scalar(const Ring& ring, const Element& c);
/// Row k is e_{map(k)}, or zero where map is undefined.
RowFiniteMap rf_index_map(const Ring& ring, std::function<std::optional<Index>(Index)> map, std::string tag);
/// Row k is e_{k+1}.
RowFiniteMap rf_shift(const Ring& ring);
RowFiniteMap rf_from_rows(const Ring& ring, RowFiniteMap::RowFn row, std::string tag);

RowFiniteMap rf_add(const RowFiniteMap& f, const RowFiniteMap& g);
RowFiniteMap rf_neg(const RowFiniteMap& f);
RowFiniteMap rf_sub(const RowFiniteMap& f, const RowFiniteMap& g);
/// Row a of fg is (row a of f) * g.
RowFiniteMap rf_compose(const RowFiniteMap& f, const RowFiniteMap& g);
/// Product of a chain, left to right.
RowFiniteMap rf_compose_all(const std::vector<RowFiniteMap>& chain);
FinVec rf_apply(const FinVec& x, const RowFiniteMap& f);
/// As above, rejecting a vector declared over a different ring.
FinVec rf_apply(const Ring& ring, const FinVec& x, const RowFiniteMap& f);
RowFiniteMap rf_pow(const RowFiniteMap& f, std::uint64_t k);
/// Left multiplication of every entry by a ring element.
RowFiniteMap rf_scale(const Element& c, const RowFiniteMap& f);
/// pi_Sigma f: rows outside Sigma replaced by zero.
RowFiniteMap rf_restrict_rows(const RowFiniteMap& f, std::function<bool(Index)> sigma, std::string label = "Sigma");
/// Rows after `last_row` are zero.
RowFiniteMap rf_truncate(const RowFiniteMap& f, Index last_row);

struct Discrepancy {
  Index row;
  FinVec lhs;
  FinVec rhs;
};

struct WindowComparison {
  bool equal = true;
  std::optional<Discrepancy> first;
  explicit operator bool() const { return equal; }
  /// "row 3: lhs {..} vs rhs {..}" or "equal".
  std::string describe(const Ring& ring) const;
};

/// Compares full rows 1..w.n (entries beyond column n included).
WindowComparison rf_equal_on_window(const RowFiniteMap& f, const RowFiniteMap& g, Window w);
/// Compares rows of f against the given expected rows.
WindowComparison rf_rows_match(const RowFiniteMap& f, Window w, const std::function<FinVec(Index)>& expected);

/// Dense w.n x m snapshot, m the largest column index among rows <= n
/// (at least n).
std::vector<std::vector<Element>> rf_window(const RowFiniteMap& f, Window w);

IndexSet rf_row_support(const RowFiniteMap& f, Index alpha);

struct SparseTriple {
  Index row;
  Index col;
  std::string value;
  friend bool operator==(const SparseTriple&, const SparseTriple&) = default;
};

/// Finite-support matrix from triples; duplicates and unparsable entries throw.
RowFiniteMap rf_from_sparse(const Ring& ring, const std::vector<SparseTriple>& triples, std::string tag = "sparse");
/// All nonzero entries in rows 1..w.n, ordered by (row, col).
std::vector<SparseTriple> rf_to_sparse(const RowFiniteMap& f, Window w);

/// Text format: header `ring <spec>`, then `<row> <col> <element>` per line.
/// Blank lines and lines starting with '#' are ignored.
std::string write_sparse(const Ring& ring, const std::vector<SparseTriple>& triples);
struct SparseMatrixFile {
  Ring ring;
  std::vector<SparseTriple> triples;
};
SparseMatrixFile read_sparse(std::istream& in);
SparseMatrixFile read_sparse_text(const std::string& text);

/// Random matrix with finitely many nonzero entries, all inside the
/// rows x cols corner.
RowFiniteMap rf_random_finite(const Ring& ring, std::mt19937_64& rng, Index rows, Index cols, double density,
                              std::string tag = "random");
/// Random entries in rows 1..n, columns 1..row (lower triangle of the corner).
RowFiniteMap rf_random_lower(const Ring& ring, std::mt19937_64& rng, Index n, double density,
                             std::string tag = "random-lower");
/// Random entries in rows 1..n, columns row..n.
RowFiniteMap rf_random_upper(const Ring& ring, std::mt19937_64& rng, Index n, double density,
                             std::string tag = "random-upper");

}  // namespace rowfin
