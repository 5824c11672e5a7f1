#pragma once

// Index combinatorics over the positive integers.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace rowfin {

/// Coordinates are 1-based.
using Index = std::uint64_t;
using IndexSet = std::set<Index>;

inline constexpr std::uint64_t kDefaultProbeBound = 1'000'000;

/// 0, -1, 1, -2, 2, ... -> 1, 2, 3, 4, 5, ...
Index zfold(std::int64_t i);
std::int64_t zunfold(Index k);

/// Cantor diagonal pairing on positive integers: (1,1) -> 1, (2,1) -> 2, (1,2) -> 3, ...
Index cantor_pair(Index a, Index b);
std::pair<Index, Index> cantor_unpair(Index k);

/// Bijection Z x N+ -> N+ used to view the index set as Z x Gamma.
struct ZPairing {
  Index encode(std::int64_t i, Index gamma) const { return cantor_pair(zfold(i), gamma); }
  std::pair<std::int64_t, Index> decode(Index k) const {
    auto [a, b] = cantor_unpair(k);
    return {zunfold(a), b};
  }
};

inline ZPairing z_pairing() { return {}; }

/// A decidable infinite subset of N+, enumerated in increasing order.
///
/// `nth` must be strictly increasing. Enumerators built from searches may
/// memoize internally; the memo behaves as a pure cache and is safe to read
/// from several threads.
class InfiniteSet {
 public:
  using NthFn = std::function<Index(Index)>;
  using ContainsFn = std::function<bool(Index)>;

  InfiniteSet(NthFn nth, ContainsFn contains, std::string label);

  static InfiniteSet naturals();
  /// {first, first + step, first + 2 step, ...}
  static InfiniteSet arithmetic(Index first, Index step);
  /// {b^0, b^1, b^2, ...}
  static InfiniteSet powers(Index base);
  /// {k : k >= first}
  static InfiniteSet tail(Index first);
  /// Strictly increasing enumeration from a lambda; membership by search.
  static InfiniteSet from_nth(NthFn nth, std::string label);

  Index nth(Index j) const;
  bool contains(Index k) const;
  /// Rank j with nth(j) == k, or nullopt when k is not a member.
  std::optional<Index> position(Index k) const;
  /// First `count` elements.
  std::vector<Index> prefix(std::size_t count) const;
  /// Members that are <= bound.
  std::vector<Index> members_upto(Index bound) const;
  const std::string& label() const { return *label_; }

 private:
  std::shared_ptr<const NthFn> nth_;
  std::shared_ptr<const ContainsFn> contains_;
  std::shared_ptr<const std::string> label_;
};

/// Partial index map between two infinite sets, matching j-th element to
/// j-th element.
class OrderIso {
 public:
  OrderIso(InfiniteSet src, InfiniteSet dst) : src_(std::move(src)), dst_(std::move(dst)) {}
  /// Defined on src; nullopt outside it.
  std::optional<Index> operator()(Index k) const;
  /// Defined exactly on dst.
  std::optional<Index> inverse(Index m) const;
  const InfiniteSet& source() const { return src_; }
  const InfiniteSet& target() const { return dst_; }

 private:
  InfiniteSet src_;
  InfiniteSet dst_;
};

inline OrderIso order_iso(InfiniteSet src, InfiniteSet dst) { return OrderIso(std::move(src), std::move(dst)); }

/// N+ split into the seven residue classes mod 7; piece i holds k = i (mod 7),
/// with class 7 for multiples of 7.
class SevenPartition {
 public:
  int class_of(Index k) const { return static_cast<int>((k - 1) % 7) + 1; }
  InfiniteSet piece(int i) const;
  /// Union of pieces 6 and 7.
  InfiniteSet tail_pieces() const;
};

inline SevenPartition seven_partition() { return {}; }

/// Triangular number i(i+1)/2.
inline Index triangular(Index i) { return i * (i + 1) / 2; }

struct IndexRange {
  Index first;
  Index last;
  bool contains(Index k) const { return k >= first && k <= last; }
  Index size() const { return last - first + 1; }
};

/// [T(i-1)+1, T(i)]: the width-i block of the triangular layout.
IndexRange tri_block(Index i);
/// Inverse of tri_block: block number i and offset k (1-based) of an index.
std::pair<Index, Index> tri_locate(Index c);

/// Chain of intersections bars(1) = F1, bars(j+1) = bars(j) n F(j+1).
/// Materializes `depth` bars and probes each for a first element; a bar that
/// yields nothing within `probe_bound` candidates throws EnumerationStall.
std::vector<InfiniteSet> nested_refine(const std::vector<InfiniteSet>& family, std::size_t depth,
                                       std::uint64_t probe_bound = kDefaultProbeBound);

/// Overlap oracle for disjointify: (i, j) with i < j -> the finite set D_i n D_j.
using OverlapFn = std::function<IndexSet(std::size_t, std::size_t)>;

/// bars(1) = D1, bars(j) = Dj minus its stated finite overlaps with earlier
/// Dis. Overlap sets are spot-checked against the first `check_count`
/// elements of each Dj; a common element missing from overlaps(i, j) throws
/// PreconditionViolation.
std::vector<InfiniteSet> disjointify(const std::vector<InfiniteSet>& deltas, const OverlapFn& overlaps,
                                     std::size_t check_count = 2000);

/// Set difference of an infinite set and a finite one.
InfiniteSet remove_finite(const InfiniteSet& base, const IndexSet& removed);

/// Elements base.nth(cantor_pair(j, k)), k = 1, 2, ...: for distinct j these
/// are pairwise disjoint infinite subsets of base.
InfiniteSet pairing_slice(const InfiniteSet& base, Index j);

}  // namespace rowfin
