#pragma once

// Ring words over named generators, their evaluation, support closures and
// the brute-force proximity oracle.

#include "rowfin/matrix.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace rowfin {

/// Immutable binary tree; leaves are generators or the constants 0, 1, -1.
class RingWord {
 public:
  enum class Kind { Gen, Zero, One, NegOne, Sum, Prod };

  static RingWord gen(std::string name);
  static RingWord zero();
  static RingWord one();
  static RingWord neg_one();
  static RingWord sum(RingWord l, RingWord r);
  static RingWord prod(RingWord l, RingWord r);
  /// Left-nested product of a non-empty list.
  static RingWord product_chain(const std::vector<RingWord>& factors);

  /// `0 | 1 | -1 | <name> | (w + w) | (w * w)`.
  static RingWord parse(std::string_view text);

  Kind kind() const { return node_->kind; }
  bool is_leaf() const { return node_->kind != Kind::Sum && node_->kind != Kind::Prod; }
  const std::string& name() const { return node_->name; }
  RingWord left() const;
  RingWord right() const;
  /// Leaves count once; sums and products add the lengths of their parts.
  std::size_t length() const { return node_->length; }
  /// Generator names used, sorted.
  std::vector<std::string> generators() const;
  /// Fully parenthesized; parse(str()) reproduces the tree.
  std::string str() const;
  /// Identity of the shared node (for evaluation caches).
  const void* id() const { return node_.get(); }

  friend bool operator==(const RingWord& a, const RingWord& b);

 private:
  struct Node {
    Kind kind;
    std::string name;
    std::shared_ptr<const Node> left;
    std::shared_ptr<const Node> right;
    std::size_t length;
  };
  explicit RingWord(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

inline std::size_t word_length(const RingWord& w) { return w.length(); }

using Environment = std::map<std::string, RowFiniteMap>;

/// Evaluates words lazily, sharing the map built for each distinct subtree
/// node across calls.
class WordEvaluator {
 public:
  WordEvaluator(Ring ring, Environment env);
  RowFiniteMap eval(const RingWord& w);
  const Environment& environment() const { return env_; }

 private:
  Ring ring_;
  Environment env_;
  std::unordered_map<const void*, RowFiniteMap> cache_;
  std::vector<RingWord> keep_alive_;
};

/// One-shot evaluation. Unbound generators and ring mismatches throw.
RowFiniteMap word_eval(const RingWord& w, const Environment& env, const Ring& ring);

/// x * eval(w), computed on the vector directly.
FinVec word_apply(const FinVec& x, const RingWord& w, const Environment& env, const Ring& ring);

/// A named contribution to the one-step support growth: every index it can
/// reach from a single coordinate.
struct SupportStep {
  std::string name;
  std::function<IndexSet(Index)> reach;
};

struct SupportBallReport {
  FinVec center;
  std::size_t radius = 0;
  IndexSet cover;
  /// Names of steps that added at least one new index.
  std::vector<std::string> contributors;
};

/// cover = G_r with G_0 = support(x), G_{k+1} = G_k u step(G_k). Every y
/// within proximity r of x is supported inside the cover.
SupportBallReport support_closure(const FinVec& x, const std::vector<SupportStep>& steps, std::size_t radius);

/// Set-level form: step(G) returns a finite superset of the supports reached
/// from G in one step. No census is kept.
SupportBallReport support_closure(const FinVec& x, const std::function<IndexSet(const IndexSet&)>& step,
                                  std::size_t radius);

/// Step contributed by a row-finite map (its row supports).
SupportStep map_step(std::string name, const RowFiniteMap& f);

struct OracleFound {
  std::size_t length;
  RingWord witness;
};
struct OracleNotWithin {
  std::size_t max_length;
};
using OracleResult = std::variant<OracleFound, OracleNotWithin>;

inline constexpr std::uint64_t kDefaultWordCap = 5'000'000;

/// Least r <= r_max such that x2 = x1 * eval(w) for some word w of length r
/// over env. Words are enumerated by length, then tree shape, then leaf
/// assignment (alphabet 0, 1, -1, then generator names in sorted order).
/// Throws BoundExceeded after `word_cap` words.
OracleResult proximity_oracle(const FinVec& x1, const FinVec& x2, const Environment& env, const Ring& ring,
                              std::size_t r_max, std::uint64_t word_cap = kDefaultWordCap);

/// Number of binary tree shapes with the given number of leaves (Catalan
/// numbers times 2^(leaves-1) operator choices).
std::uint64_t word_shape_count(std::size_t length);

}  // namespace rowfin
