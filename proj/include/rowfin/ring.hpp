#pragma once

// Exact-arithmetic entry rings.
//
// A Ring is a cheap, shareable handle to an immutable descriptor. Elements
// are plain values that do not remember their ring; every operation goes
// through the Ring that owns them. `Value` pairs the two for call sites that
// want mismatches caught at runtime.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace rowfin {

using BigInt = boost::multiprecision::cpp_int;

/// Canonical element payload. Integer-like rings use `scalar` (residues kept
/// in [0, n)); matrix rings use `grid`, row-major, k*k inner elements.
struct Element {
  BigInt scalar;
  std::vector<Element> grid;

  friend bool operator==(const Element&, const Element&) = default;
};

class Ring {
 public:
  enum class Kind { Integers, IntegersMod, PrimeField, Matrix };

  static Ring integers();
  static Ring integers_mod(std::uint64_t n);
  static Ring prime_field(std::uint64_t p);
  static Ring matrices(const Ring& base, std::size_t k);

  /// Grammar: `Int | Zmod:<n> | GF:<p> | Mat:<k>:<inner-spec>`.
  static Ring parse(std::string_view text);

  Kind kind() const;
  /// Round-trips through parse().
  const std::string& spec() const;
  /// Modulus for Zmod/GF; unused otherwise.
  std::uint64_t modulus() const;
  /// Matrix size k and entry ring for Mat rings.
  std::size_t matrix_size() const;
  const Ring& base() const;

  /// Number of elements, or nullopt for Integers.
  std::optional<std::uint64_t> order() const;
  bool is_commutative() const;
  /// True exactly for GF(p) and Mat:k over GF(p).
  bool is_simple_hint() const;

  Element zero() const;
  Element one() const;
  Element from_int(long long v) const;
  Element add(const Element& a, const Element& b) const;
  Element sub(const Element& a, const Element& b) const;
  Element mul(const Element& a, const Element& b) const;
  Element neg(const Element& a) const;
  bool is_zero(const Element& a) const;
  bool is_one(const Element& a) const;

  /// Reduces a payload of the right shape into canonical form.
  Element canonicalize(const Element& a) const;
  bool is_canonical(const Element& a) const;

  /// Decimal for integer-like rings, `[[a,b],[c,d]]` for matrices.
  std::string format(const Element& a) const;
  Element parse_element(std::string_view text) const;

  /// Enumeration of the ring: a bijection onto [0, order) for finite rings;
  /// for Integers the injective order 0, 1, -1, 2, -2, ...
  Element element_at(std::uint64_t index) const;

  /// Uniform over finite rings; for Integers uniform in [-bound, bound].
  Element random(std::mt19937_64& rng, std::uint64_t int_bound = 9) const;

  /// Matrix unit E_ij (0-based) of a Mat ring.
  Element matrix_unit(std::size_t i, std::size_t j) const;

  friend bool operator==(const Ring& a, const Ring& b);
  friend bool operator!=(const Ring& a, const Ring& b) { return !(a == b); }

 private:
  struct Descriptor;
  explicit Ring(std::shared_ptr<const Descriptor> d);
  std::shared_ptr<const Descriptor> d_;
};

/// Element tagged with its ring; arithmetic across rings throws RingMismatch.
class Value {
 public:
  Value(Ring ring, Element e);
  static Value parse(const Ring& ring, std::string_view text);

  const Ring& ring() const { return ring_; }
  const Element& element() const { return e_; }
  std::string str() const { return ring_.format(e_); }

  friend Value operator+(const Value& a, const Value& b);
  friend Value operator*(const Value& a, const Value& b);
  friend Value operator-(const Value& a);
  friend bool operator==(const Value& a, const Value& b);

 private:
  Ring ring_;
  Element e_;
};

bool is_prime(std::uint64_t n);

/// Reduces mod m into [0, m) (m > 0). rng() % m, kept here so every random
/// stream in the project stays platform independent.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t m);

}  // namespace rowfin
