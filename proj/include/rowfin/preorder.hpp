#pragma once

// Preorders on N+ described by a decidable relation plus finiteness tags
// that the relation alone cannot certify.

#include "rowfin/indexing.hpp"

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace rowfin {

/// A subset of N+ known to be finite (listed) or infinite (enumerated).
using Support = std::variant<IndexSet, InfiniteSet>;

inline bool is_finite(const Support& s) { return std::holds_alternative<IndexSet>(s); }
bool support_contains(const Support& s, Index k);
std::string describe(const Support& s);

enum class RefinementBranch { Nested, Disjoint };

std::string to_string(RefinementBranch b);

/// Anchors alpha_j (distinct) with infinite sets bars(j) inside upset(alpha_j),
/// either nested (bars(j) within bars(j') for j >= j') or pairwise disjoint.
struct Refinement {
  RefinementBranch branch = RefinementBranch::Nested;
  std::function<Index(Index)> anchor;
  std::function<InfiniteSet(Index)> bars;
  /// Disjoint branch: which bar holds an index, and its rank there.
  std::function<std::optional<std::pair<Index, Index>>(Index)> locate;
};

class Preorder {
 public:
  using Relation = std::function<bool(Index, Index)>;
  using UpsetFn = std::function<Support(Index)>;

  Preorder(std::string name, Relation rel, UpsetFn upset, Support infinite_upset_indices,
           std::optional<Refinement> refinement = std::nullopt);

  /// `diag`, `le`, `ge`, `full`, `mod:<m>:<pairs>`, `union-finite:<pairs>`.
  /// Pairs are integer pairs such as `{(1,0),(2,3)}`; braces are optional.
  static Preorder parse(std::string_view dsl);

  static Preorder diagonal();
  /// (a, b) in rho iff a <= b: upper-triangular matrices.
  static Preorder less_equal();
  /// (a, b) in rho iff a >= b: lower-triangular matrices.
  static Preorder greater_equal();
  static Preorder full();
  /// Residue classes mod m related by the transitive closure of the class
  /// pairs, plus the diagonal.
  static Preorder modular(Index m, const std::vector<std::pair<Index, Index>>& class_pairs);
  /// Diagonal plus the transitive closure of finitely many index pairs.
  static Preorder union_finite(const std::vector<std::pair<Index, Index>>& pairs);
  /// Diagonal plus {(root, b) : all b}: a single infinite up-set.
  static Preorder star(Index root);

  const std::string& name() const { return name_; }
  bool rel(Index a, Index b) const { return rel_(a, b); }
  Support upset(Index a) const { return upset_(a); }
  const Support& infinite_upset_indices() const { return infinite_; }
  const std::optional<Refinement>& refinement() const { return refinement_; }

  /// A copy carrying a different (possibly wrong) infinite-index tag.
  Preorder with_infinite_tag(Support tag) const;

 private:
  std::string name_;
  Relation rel_;
  UpsetFn upset_;
  Support infinite_;
  std::optional<Refinement> refinement_;
};

struct SpotCheckBounds {
  Index relation_bound = 40;        // indices checked for reflexivity and up-set agreement
  std::size_t transitive_trials = 2000;
  Index refinement_bars = 6;
  std::size_t bar_prefix = 30;
  std::uint64_t seed = 1;
};

/// Randomized and bounded consistency checks of a descriptor. Returns the
/// list of problems found; empty means consistent up to the bounds.
std::vector<std::string> spot_check(const Preorder& rho, const SpotCheckBounds& bounds = {});

}  // namespace rowfin
