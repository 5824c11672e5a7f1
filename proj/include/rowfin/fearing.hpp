#pragma once

// Subsets of E given by row-support bounds, and the witnesses built from
// those bounds: the finite/infinite split, the lower-triangular embedding,
// and the escape sequence that no finite generating set can reach.

#include "rowfin/check.hpp"
#include "rowfin/preorder.hpp"
#include "rowfin/words.hpp"

#include <functional>

namespace rowfin {

struct TwoGenWitness;

struct FearingDescriptor {
  using Violation = std::optional<std::pair<Index, Index>>;

  std::string name;
  Ring ring;
  /// Bound on the row-alpha support of every member.
  std::function<Support(Index)> supp;
  /// Indices whose bound is infinite.
  Support infinite_rows;
  /// First cell on the window that rules out membership.
  std::function<Violation(const RowFiniteMap&, Window)> first_violation;
  /// A member, determined by the seed; every row is generated on demand.
  std::function<RowFiniteMap(std::uint64_t)> sample;

  bool member_on_window(const RowFiniteMap& f, Window w) const { return !first_violation(f, w); }

  /// supp(a) = {a}.
  static FearingDescriptor diagonal(const Ring& ring);
  /// supp(k) = {1..2k}.
  static FearingDescriptor banded(const Ring& ring);
  /// supp(a) = upset(a); infinite rows from the descriptor tag.
  static FearingDescriptor from_preorder(const Ring& ring, const Preorder& rho);
};

/// Membership test derived from a support bound alone.
std::function<FearingDescriptor::Violation(const RowFiniteMap&, Window)> support_violation(
    std::function<Support(Index)> supp);

struct WeakFearSplit {
  IndexSet sigma;
  /// Members of S that act diagonally on sigma.
  FearingDescriptor s_prime;
  /// Members of S that act diagonally off sigma.
  FearingDescriptor s_double_prime;
};

/// Requires finitely many infinite rows (PreconditionViolation otherwise).
WeakFearSplit split_weak_fearing(const FearingDescriptor& S);

/// For each sample: the two row restrictions re-sum to it and land in S' and
/// S''; the sigma part is rebuilt from constant diagonals times matrix units
/// evaluated from two-generator words.
/// `tamper` is applied to the two-generator witness before the words are
/// evaluated.
CheckList verify_split(const WeakFearSplit& split, const FearingDescriptor& S, std::size_t samples, Window w,
                       std::uint64_t seed = 1, const std::function<void(TwoGenWitness&)>& tamper = {});

struct LowerEmbed {
  /// l'_k, computed on demand.
  std::function<Index(Index)> level;
  /// Row l'_k is e_k, other rows zero.
  RowFiniteMap f;
  /// Row k is e_{l'_k}.
  RowFiniteMap g;
};

/// l_k = max of supp(1..k), l'_k = max(l_k, l'_{k-1} + 1). Requires every
/// bound to be finite.
LowerEmbed fear_lower_embed(const FearingDescriptor& S);

/// g f = 1 on the window; for each sample h, f h is lower-triangular on
/// rows 1..l'_n and g (f h) = h on the window.
CheckList verify_lower_embed(const LowerEmbed& le, const FearingDescriptor& S, std::size_t samples, Window w,
                             std::uint64_t seed = 1);

struct FearStep {
  Index m;
  Index escape;
  FinVec x;
  FinVec y;
  IndexSet cover;
  IndexSet block;
  std::vector<std::string> contributors;
};

struct FearWitness {
  std::vector<FearStep> steps;
  /// Row m_j is e_{escape_j}, other rows zero.
  RowFiniteMap g;
};

/// Named maps for U. Steps j = 1..J: x_j = e_{m_j} with m_j just past all
/// earlier blocks, cover_j the radius-j closure from S's bounds and U's rows,
/// escape_j just past cover_j and earlier blocks.
FearWitness fear_witness(const FearingDescriptor& S, const Environment& U, std::size_t J);

/// escape_j outside cover_j and in support(y_j); blocks disjoint and holding
/// both supports; x_j g = y_j.
CheckList verify_fear_witness(const FearWitness& fw);

/// Every diagonal map over a finite ring whose entries vanish outside
/// `coords`, named d0000, d0001, ...; throws BoundExceeded past `limit` maps.
Environment diagonal_representatives(const Ring& ring, const IndexSet& coords, std::uint64_t limit = 4096);

/// For S = D: for j <= jmax, the brute-force proximity over U plus the
/// diagonal representatives on cover_j finds no word of length <= j taking
/// x_j to y_j.
CheckList confirm_fear_by_oracle(const FearWitness& fw, const Environment& U, const Ring& ring, std::size_t jmax,
                                 std::uint64_t word_cap = kDefaultWordCap);

}  // namespace rowfin
