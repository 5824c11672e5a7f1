#pragma once

// A countable family of endomorphisms packed into five maps g1..g5, then
// into words over two generators f1, f3; and the diagonal embedding of a
// countable ring built on top of it.

#include "rowfin/check.hpp"
#include "rowfin/words.hpp"

#include <array>
#include <functional>
#include <map>

namespace rowfin {

/// u_i for finitely many i in Z.
using SourceFamily = std::map<std::int64_t, RowFiniteMap>;

struct GFamily {
  Ring ring;
  ZPairing pairing;
  SourceFamily source;
  /// g1: row k = e_{(0,k)}. g2: row (0,k) = e_k, other rows zero.
  /// g3: row (i,c) = row c of u_i moved into layer i. g4: (i,c) -> (i+1,c).
  /// g5: (i,c) -> (i-1,c).
  RowFiniteMap g1, g2, g3, g4, g5;

  /// g1..g5 by number.
  const RowFiniteMap& g(int i) const;
  /// Projection onto the layer {(0,k)}.
  RowFiniteMap layer_zero_projection() const;
};

GFamily build_g_family(const Ring& ring, SourceFamily source, ZPairing pairing = {});

/// g1 g4^i g3 g5^i g2 (with g4 and g5 exchanged for negative i).
RowFiniteMap g_family_value(const GFamily& gf, std::int64_t i);

/// g2g1 = layer projection, g1g2 = 1, g4g5 = g5g4 = 1, and every u_i
/// recovered from the g's, all on the window.
CheckList verify_g_family(const GFamily& gf, Window w);

struct TwoGenWitness {
  Ring ring;
  RowFiniteMap f1;
  /// Row k is e_{7k-6}; not a generator, kept for inspection.
  RowFiniteMap f2;
  RowFiniteMap f3;
  std::vector<std::int64_t> materialized;
  /// Leaf words "f1", "f3" and the five g-words built from them; u-words
  /// share these nodes.
  RingWord f1_word;
  RingWord f3_word;
  std::array<RingWord, 5> g_words;

  Environment env() const;
  /// f1^6 f3 f1^i f3, i = 1..5.
  const RingWord& word_for_g(int i) const;
  /// The g-word chain for u_i, expanded into {f1, f3}.
  RingWord word_for_u(std::int64_t i) const;
};

TwoGenWitness build_two_generators(const GFamily& gf, const SevenPartition& partition = {});

/// Each g-word evaluates to g_i and each u-word to u_i on the window.
CheckList verify_two_generators(const TwoGenWitness& tg, const GFamily& gf, Window w);

/// Shorthand: build, verify on the window, throw VerificationFailure on any
/// failed identity.
TwoGenWitness two_generator_words(const Ring& ring, SourceFamily source, Window w);

struct MaltsevReport {
  Ring ring;
  std::vector<Element> elements;
  /// Element number e sits at family index zunfold(e + 1).
  std::vector<std::int64_t> family_index;
  std::vector<RingWord> words;
  std::vector<bool> central;
  CheckList checks;
};

struct MaltsevOptions {
  Window window{16};
  std::uint64_t seed = 1;
  std::size_t commute_samples = 20;
  /// Applied to the two-generator witness before verification.
  std::function<void(TwoGenWitness&)> tamper;
};

/// Diagonal embedding s -> (constant diagonal s) of the first `count`
/// elements, expressed through two generators and verified on the window.
MaltsevReport maltsev_embed(const Ring& ring, std::size_t count, const MaltsevOptions& options);

/// Central elements among `elements`: exhaustive for finite rings, matrix
/// units for matrix rings over infinite bases, everything when commutative.
std::vector<bool> central_flags(const Ring& ring, const std::vector<Element>& elements);

}  // namespace rowfin
