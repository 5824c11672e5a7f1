#include "rowfin/ring.hpp"

#include "rowfin/errors.hpp"

#include <cctype>
#include <charconv>
#include <limits>
#include <sstream>

namespace rowfin {

struct Ring::Descriptor {
  Kind kind = Kind::Integers;
  std::uint64_t modulus = 0;
  std::size_t size = 0;
  std::optional<Ring> base;
  std::string spec;
};

namespace {

BigInt reduce(const BigInt& v, std::uint64_t n) {
  BigInt r = v % n;
  if (r < 0) r += n;
  return r;
}

std::uint64_t parse_u64(std::string_view s, std::string_view what) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError("ring spec: expected unsigned integer for " + std::string(what) +
                     ", got '" + std::string(s) + "'");
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Ring::Ring(std::shared_ptr<const Descriptor> d) : d_(std::move(d)) {}

Ring Ring::integers() {
  auto d = std::make_shared<Descriptor>();
  d->kind = Kind::Integers;
  d->spec = "Int";
  return Ring(std::move(d));
}

Ring Ring::integers_mod(std::uint64_t n) {
  if (n < 2) throw ParseError("Zmod:n requires n >= 2, got " + std::to_string(n));
  auto d = std::make_shared<Descriptor>();
  d->kind = Kind::IntegersMod;
  d->modulus = n;
  d->spec = "Zmod:" + std::to_string(n);
  return Ring(std::move(d));
}

Ring Ring::prime_field(std::uint64_t p) {
  if (!is_prime(p)) throw ParseError("GF:p requires p prime, got " + std::to_string(p));
  auto d = std::make_shared<Descriptor>();
  d->kind = Kind::PrimeField;
  d->modulus = p;
  d->spec = "GF:" + std::to_string(p);
  return Ring(std::move(d));
}

Ring Ring::matrices(const Ring& base, std::size_t k) {
  if (k < 1) throw ParseError("Mat:k requires k >= 1");
  auto d = std::make_shared<Descriptor>();
  d->kind = Kind::Matrix;
  d->size = k;
  d->base = base;
  d->spec = "Mat:" + std::to_string(k) + ":" + base.spec();
  return Ring(std::move(d));
}

Ring Ring::parse(std::string_view text) {
  text = trim(text);
  if (text == "Int") return integers();
  auto take_field = [&](std::string_view prefix) -> std::optional<std::string_view> {
    if (text.substr(0, prefix.size()) == prefix) return text.substr(prefix.size());
    return std::nullopt;
  };
  if (auto rest = take_field("Zmod:")) return integers_mod(parse_u64(*rest, "Zmod modulus"));
  if (auto rest = take_field("GF:")) return prime_field(parse_u64(*rest, "GF characteristic"));
  if (auto rest = take_field("Mat:")) {
    auto colon = rest->find(':');
    if (colon == std::string_view::npos) throw ParseError("ring spec: Mat:<k>:<inner> missing inner spec");
    auto k = parse_u64(rest->substr(0, colon), "Mat size");
    return matrices(parse(rest->substr(colon + 1)), k);
  }
  throw ParseError("ring spec: unrecognized '" + std::string(text) + "'");
}

Ring::Kind Ring::kind() const { return d_->kind; }
const std::string& Ring::spec() const { return d_->spec; }
std::uint64_t Ring::modulus() const { return d_->modulus; }
std::size_t Ring::matrix_size() const { return d_->size; }

const Ring& Ring::base() const {
  if (!d_->base) throw Error("ring " + d_->spec + " has no base ring");
  return *d_->base;
}

std::optional<std::uint64_t> Ring::order() const {
  switch (d_->kind) {
    case Kind::Integers:
      return std::nullopt;
    case Kind::IntegersMod:
    case Kind::PrimeField:
      return d_->modulus;
    case Kind::Matrix: {
      auto inner = base().order();
      if (!inner) return std::nullopt;
      std::uint64_t total = 1;
      for (std::size_t i = 0; i < d_->size * d_->size; ++i) {
        if (total > std::numeric_limits<std::uint64_t>::max() / *inner) return std::nullopt;
        total *= *inner;
      }
      return total;
    }
  }
  return std::nullopt;
}

bool Ring::is_commutative() const { return d_->kind != Kind::Matrix || d_->size == 1; }

bool Ring::is_simple_hint() const {
  if (d_->kind == Kind::PrimeField) return true;
  return d_->kind == Kind::Matrix && base().kind() == Kind::PrimeField;
}

Element Ring::zero() const {
  Element e;
  if (d_->kind == Kind::Matrix) e.grid.assign(d_->size * d_->size, base().zero());
  return e;
}

Element Ring::one() const {
  if (d_->kind != Kind::Matrix) return Element{BigInt(1), {}};
  Element e = zero();
  for (std::size_t i = 0; i < d_->size; ++i) e.grid[i * d_->size + i] = base().one();
  return e;
}

Element Ring::from_int(long long v) const {
  switch (d_->kind) {
    case Kind::Integers:
      return Element{BigInt(v), {}};
    case Kind::IntegersMod:
    case Kind::PrimeField:
      return Element{reduce(BigInt(v), d_->modulus), {}};
    case Kind::Matrix: {
      Element e = zero();
      for (std::size_t i = 0; i < d_->size; ++i) e.grid[i * d_->size + i] = base().from_int(v);
      return e;
    }
  }
  return {};
}

Element Ring::add(const Element& a, const Element& b) const {
  switch (d_->kind) {
    case Kind::Integers:
      return Element{a.scalar + b.scalar, {}};
    case Kind::IntegersMod:
    case Kind::PrimeField: {
      BigInt s = a.scalar + b.scalar;
      if (s >= d_->modulus) s -= d_->modulus;
      return Element{std::move(s), {}};
    }
    case Kind::Matrix: {
      Element e;
      e.grid.reserve(a.grid.size());
      for (std::size_t i = 0; i < a.grid.size(); ++i) e.grid.push_back(base().add(a.grid[i], b.grid[i]));
      return e;
    }
  }
  return {};
}

Element Ring::neg(const Element& a) const {
  switch (d_->kind) {
    case Kind::Integers:
      return Element{-a.scalar, {}};
    case Kind::IntegersMod:
    case Kind::PrimeField:
      return Element{a.scalar == 0 ? BigInt(0) : BigInt(d_->modulus - a.scalar), {}};
    case Kind::Matrix: {
      Element e;
      e.grid.reserve(a.grid.size());
      for (const auto& x : a.grid) e.grid.push_back(base().neg(x));
      return e;
    }
  }
  return {};
}

Element Ring::sub(const Element& a, const Element& b) const { return add(a, neg(b)); }

Element Ring::mul(const Element& a, const Element& b) const {
  switch (d_->kind) {
    case Kind::Integers:
      return Element{a.scalar * b.scalar, {}};
    case Kind::IntegersMod:
    case Kind::PrimeField:
      return Element{(a.scalar * b.scalar) % d_->modulus, {}};
    case Kind::Matrix: {
      const std::size_t k = d_->size;
      const Ring& r = base();
      Element e = zero();
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
          Element acc = r.zero();
          for (std::size_t l = 0; l < k; ++l) acc = r.add(acc, r.mul(a.grid[i * k + l], b.grid[l * k + j]));
          e.grid[i * k + j] = std::move(acc);
        }
      }
      return e;
    }
  }
  return {};
}

bool Ring::is_zero(const Element& a) const {
  if (d_->kind != Kind::Matrix) return a.scalar == 0;
  for (const auto& x : a.grid) {
    if (!base().is_zero(x)) return false;
  }
  return true;
}

bool Ring::is_one(const Element& a) const { return a == one(); }

Element Ring::canonicalize(const Element& a) const {
  switch (d_->kind) {
    case Kind::Integers:
      return Element{a.scalar, {}};
    case Kind::IntegersMod:
    case Kind::PrimeField:
      return Element{reduce(a.scalar, d_->modulus), {}};
    case Kind::Matrix: {
      if (a.grid.size() != d_->size * d_->size) throw RingMismatch("element shape does not match " + spec());
      Element e;
      for (const auto& x : a.grid) e.grid.push_back(base().canonicalize(x));
      return e;
    }
  }
  return {};
}

bool Ring::is_canonical(const Element& a) const {
  switch (d_->kind) {
    case Kind::Integers:
      return a.grid.empty();
    case Kind::IntegersMod:
    case Kind::PrimeField:
      return a.grid.empty() && a.scalar >= 0 && a.scalar < d_->modulus;
    case Kind::Matrix:
      if (a.scalar != 0 || a.grid.size() != d_->size * d_->size) return false;
      for (const auto& x : a.grid) {
        if (!base().is_canonical(x)) return false;
      }
      return true;
  }
  return false;
}

std::string Ring::format(const Element& a) const {
  if (d_->kind != Kind::Matrix) return a.scalar.str();
  const std::size_t k = d_->size;
  std::string out = "[";
  for (std::size_t i = 0; i < k; ++i) {
    if (i) out += ',';
    out += '[';
    for (std::size_t j = 0; j < k; ++j) {
      if (j) out += ',';
      out += base().format(a.grid[i * k + j]);
    }
    out += ']';
  }
  out += ']';
  return out;
}

namespace {

// Splits "[x,y,...]" at top-level commas.
std::vector<std::string_view> split_bracketed(std::string_view text) {
  text = trim(text);
  if (text.size() < 2 || text.front() != '[' || text.back() != ']') {
    throw ParseError("element: expected bracketed list, got '" + std::string(text) + "'");
  }
  text = text.substr(1, text.size() - 2);
  std::vector<std::string_view> parts;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '[') ++depth;
    if (text[i] == ']') --depth;
    if (depth < 0) throw ParseError("element: unbalanced brackets");
    if (text[i] == ',' && depth == 0) {
      parts.push_back(trim(text.substr(start, i - start)));
      start = i + 1;
    }
  }
  if (depth != 0) throw ParseError("element: unbalanced brackets");
  parts.push_back(trim(text.substr(start)));
  return parts;
}

}  // namespace

Element Ring::parse_element(std::string_view text) const {
  text = trim(text);
  if (d_->kind == Kind::Matrix) {
    const std::size_t k = d_->size;
    auto rows = split_bracketed(text);
    if (rows.size() != k) throw ParseError("element: expected " + std::to_string(k) + " rows");
    Element e;
    for (auto row : rows) {
      auto cells = split_bracketed(row);
      if (cells.size() != k) throw ParseError("element: expected " + std::to_string(k) + " columns");
      for (auto c : cells) e.grid.push_back(base().parse_element(c));
    }
    return e;
  }
  std::string_view digits = text;
  if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) digits.remove_prefix(1);
  if (digits.empty()) throw ParseError("element: empty integer");
  for (char c : digits) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw ParseError("element: not an integer: '" + std::string(text) + "'");
    }
  }
  BigInt v{std::string(digits)};
  if (text.front() == '-') v = -v;
  return canonicalize(Element{std::move(v), {}});
}

Element Ring::element_at(std::uint64_t index) const {
  switch (d_->kind) {
    case Kind::Integers: {
      // 0, 1, -1, 2, -2, ...
      BigInt magnitude = BigInt((index + 1) / 2);
      return Element{index % 2 == 1 ? magnitude : BigInt(-magnitude), {}};
    }
    case Kind::IntegersMod:
    case Kind::PrimeField:
      if (index >= d_->modulus) throw Error("element_at: index out of range for " + spec());
      return Element{BigInt(index), {}};
    case Kind::Matrix: {
      auto total = order();
      if (total && index >= *total) throw Error("element_at: index out of range for " + spec());
      auto inner = base().order();
      if (!inner) {
        // Only the diagonal direction is enumerated for infinite bases.
        Element e = zero();
        e.grid[0] = base().element_at(index);
        return e;
      }
      Element e = zero();
      for (auto& cell : e.grid) {
        cell = base().element_at(index % *inner);
        index /= *inner;
      }
      return e;
    }
  }
  return {};
}

Element Ring::random(std::mt19937_64& rng, std::uint64_t int_bound) const {
  switch (d_->kind) {
    case Kind::Integers: {
      auto span = 2 * int_bound + 1;
      return Element{BigInt(static_cast<long long>(uniform_below(rng, span)) - static_cast<long long>(int_bound)), {}};
    }
    case Kind::IntegersMod:
    case Kind::PrimeField:
      return Element{BigInt(uniform_below(rng, d_->modulus)), {}};
    case Kind::Matrix: {
      Element e = zero();
      for (auto& cell : e.grid) cell = base().random(rng, int_bound);
      return e;
    }
  }
  return {};
}

Element Ring::matrix_unit(std::size_t i, std::size_t j) const {
  if (d_->kind != Kind::Matrix || i >= d_->size || j >= d_->size) {
    throw Error("matrix_unit: not a matrix ring index for " + spec());
  }
  Element e = zero();
  e.grid[i * d_->size + j] = base().one();
  return e;
}

bool operator==(const Ring& a, const Ring& b) { return a.d_ == b.d_ || a.d_->spec == b.d_->spec; }

Value::Value(Ring ring, Element e) : ring_(std::move(ring)), e_(ring_.canonicalize(e)) {}

Value Value::parse(const Ring& ring, std::string_view text) { return Value(ring, ring.parse_element(text)); }

namespace {
void require_same(const Value& a, const Value& b) {
  if (a.ring() != b.ring()) throw RingMismatch("ring mismatch: " + a.ring().spec() + " vs " + b.ring().spec());
}
}  // namespace

Value operator+(const Value& a, const Value& b) {
  require_same(a, b);
  return Value(a.ring_, a.ring_.add(a.e_, b.e_));
}

Value operator*(const Value& a, const Value& b) {
  require_same(a, b);
  return Value(a.ring_, a.ring_.mul(a.e_, b.e_));
}

Value operator-(const Value& a) { return Value(a.ring_, a.ring_.neg(a.e_)); }

bool operator==(const Value& a, const Value& b) { return a.ring_ == b.ring_ && a.e_ == b.e_; }

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t m) { return rng() % m; }

}  // namespace rowfin
