#include "rowfin/words.hpp"

#include "rowfin/errors.hpp"

#include <cctype>
#include <functional>
#include <set>

namespace rowfin {

RingWord RingWord::gen(std::string name) {
  if (name.empty()) throw ParseError("word: empty generator name");
  return RingWord(std::make_shared<const Node>(Node{Kind::Gen, std::move(name), nullptr, nullptr, 1}));
}
RingWord RingWord::zero() { return RingWord(std::make_shared<const Node>(Node{Kind::Zero, "", nullptr, nullptr, 1})); }
RingWord RingWord::one() { return RingWord(std::make_shared<const Node>(Node{Kind::One, "", nullptr, nullptr, 1})); }
RingWord RingWord::neg_one() {
  return RingWord(std::make_shared<const Node>(Node{Kind::NegOne, "", nullptr, nullptr, 1}));
}

RingWord RingWord::sum(RingWord l, RingWord r) {
  const std::size_t n = l.length() + r.length();
  return RingWord(std::make_shared<const Node>(Node{Kind::Sum, "", std::move(l.node_), std::move(r.node_), n}));
}

RingWord RingWord::prod(RingWord l, RingWord r) {
  const std::size_t n = l.length() + r.length();
  return RingWord(std::make_shared<const Node>(Node{Kind::Prod, "", std::move(l.node_), std::move(r.node_), n}));
}

RingWord RingWord::product_chain(const std::vector<RingWord>& factors) {
  if (factors.empty()) throw Error("product_chain: no factors");
  RingWord out = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) out = prod(out, factors[i]);
  return out;
}

RingWord RingWord::left() const {
  if (is_leaf()) throw Error("word leaf has no children");
  return RingWord(node_->left);
}

RingWord RingWord::right() const {
  if (is_leaf()) throw Error("word leaf has no children");
  return RingWord(node_->right);
}

std::vector<std::string> RingWord::generators() const {
  std::set<std::string> names;
  std::function<void(const Node&)> walk = [&](const Node& n) {
    if (n.kind == Kind::Gen) names.insert(n.name);
    if (n.left) walk(*n.left);
    if (n.right) walk(*n.right);
  };
  walk(*node_);
  return {names.begin(), names.end()};
}

std::string RingWord::str() const {
  switch (kind()) {
    case Kind::Gen:
      return name();
    case Kind::Zero:
      return "0";
    case Kind::One:
      return "1";
    case Kind::NegOne:
      return "-1";
    case Kind::Sum:
      return "(" + left().str() + " + " + right().str() + ")";
    case Kind::Prod:
      return "(" + left().str() + " * " + right().str() + ")";
  }
  return {};
}

bool operator==(const RingWord& a, const RingWord& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  if (a.kind() == RingWord::Kind::Gen) return a.name() == b.name();
  if (a.is_leaf()) return true;
  return a.left() == b.left() && a.right() == b.right();
}

namespace {

class WordParser {
 public:
  explicit WordParser(std::string_view text) : text_(text) {}

  RingWord parse_all() {
    RingWord w = parse_word();
    skip_space();
    if (pos_ != text_.size()) fail("trailing input");
    return w;
  }

 private:
  RingWord parse_word() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      RingWord l = parse_word();
      skip_space();
      if (pos_ >= text_.size()) fail("expected operator");
      char op = text_[pos_];
      if (op != '+' && op != '*') fail("expected '+' or '*'");
      ++pos_;
      RingWord r = parse_word();
      skip_space();
      if (pos_ >= text_.size() || text_[pos_] != ')') fail("expected ')'");
      ++pos_;
      return op == '+' ? RingWord::sum(l, r) : RingWord::prod(l, r);
    }
    if (c == '-') {
      if (text_.substr(pos_, 2) != "-1") fail("only -1 may start with '-'");
      pos_ += 2;
      return RingWord::neg_one();
    }
    if (c == '0' || c == '1') {
      ++pos_;
      if (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) fail("constants are 0, 1, -1");
      return c == '0' ? RingWord::zero() : RingWord::one();
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
      return RingWord::gen(std::string(text_.substr(start, pos_ - start)));
    }
    fail("unexpected character");
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& why) const {
    throw ParseError("word: " + why + " at offset " + std::to_string(pos_) + " in '" + std::string(text_) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

RingWord RingWord::parse(std::string_view text) { return WordParser(text).parse_all(); }

WordEvaluator::WordEvaluator(Ring ring, Environment env) : ring_(std::move(ring)), env_(std::move(env)) {
  for (const auto& [name, f] : env_) {
    if (f.ring() != ring_) throw RingMismatch("generator " + name + " is over " + f.ring().spec() + ", expected " + ring_.spec());
  }
}

RowFiniteMap WordEvaluator::eval(const RingWord& w) {
  if (auto it = cache_.find(w.id()); it != cache_.end()) return it->second;
  RowFiniteMap out = [&]() -> RowFiniteMap {
    switch (w.kind()) {
      case RingWord::Kind::Gen: {
        auto it = env_.find(w.name());
        if (it == env_.end()) throw Error("word_eval: unbound generator '" + w.name() + "'");
        return it->second;
      }
      case RingWord::Kind::Zero:
        return rf_zero(ring_);
      case RingWord::Kind::One:
        return rf_identity(ring_);
      case RingWord::Kind::NegOne:
        return rf_neg(rf_identity(ring_));
      case RingWord::Kind::Sum:
        return rf_add(eval(w.left()), eval(w.right()));
      case RingWord::Kind::Prod:
        return rf_compose(eval(w.left()), eval(w.right()));
    }
    throw Error("word_eval: bad node");
  }();
  cache_.emplace(w.id(), out);
  keep_alive_.push_back(w);
  return out;
}

RowFiniteMap word_eval(const RingWord& w, const Environment& env, const Ring& ring) {
  WordEvaluator ev(ring, env);
  return ev.eval(w);
}

FinVec word_apply(const FinVec& x, const RingWord& w, const Environment& env, const Ring& ring) {
  switch (w.kind()) {
    case RingWord::Kind::Gen: {
      auto it = env.find(w.name());
      if (it == env.end()) throw Error("word_apply: unbound generator '" + w.name() + "'");
      return rf_apply(ring, x, it->second);
    }
    case RingWord::Kind::Zero:
      return {};
    case RingWord::Kind::One:
      return x;
    case RingWord::Kind::NegOne:
      return vec_neg(ring, x);
    case RingWord::Kind::Sum:
      return vec_add(ring, word_apply(x, w.left(), env, ring), word_apply(x, w.right(), env, ring));
    case RingWord::Kind::Prod:
      return word_apply(word_apply(x, w.left(), env, ring), w.right(), env, ring);
  }
  return {};
}

SupportBallReport support_closure(const FinVec& x, const std::vector<SupportStep>& steps, std::size_t radius) {
  SupportBallReport report;
  report.center = x;
  report.radius = radius;
  report.cover = x.support();
  std::set<std::string> contributors;
  IndexSet frontier = report.cover;
  for (std::size_t k = 0; k < radius && !frontier.empty(); ++k) {
    IndexSet next;
    for (Index i : frontier) {
      for (const auto& step : steps) {
        for (Index j : step.reach(i)) {
          if (!report.cover.count(j) && !next.count(j)) {
            next.insert(j);
            contributors.insert(step.name);
          }
        }
      }
    }
    report.cover.insert(next.begin(), next.end());
    frontier = std::move(next);
  }
  report.contributors.assign(contributors.begin(), contributors.end());
  return report;
}

SupportBallReport support_closure(const FinVec& x, const std::function<IndexSet(const IndexSet&)>& step,
                                  std::size_t radius) {
  SupportBallReport report;
  report.center = x;
  report.radius = radius;
  report.cover = x.support();
  for (std::size_t k = 0; k < radius; ++k) {
    const std::size_t before = report.cover.size();
    IndexSet grown = step(report.cover);
    report.cover.insert(grown.begin(), grown.end());
    if (report.cover.size() == before) break;
  }
  return report;
}

SupportStep map_step(std::string name, const RowFiniteMap& f) {
  return SupportStep{std::move(name), [f](Index i) { return f.row(i).support(); }};
}

namespace {

// Tree shapes with a fixed number of leaves; leaves are placeholders.
struct Shape {
  bool leaf = true;
  bool sum = false;
  std::shared_ptr<const Shape> left;
  std::shared_ptr<const Shape> right;
  std::size_t leaves = 1;
};
using ShapePtr = std::shared_ptr<const Shape>;

const std::vector<ShapePtr>& shapes_of(std::size_t n, std::vector<std::vector<ShapePtr>>& memo) {
  if (memo.size() <= n) memo.resize(n + 1);
  if (!memo[n].empty()) return memo[n];
  std::vector<ShapePtr> out;
  if (n == 1) {
    out.push_back(std::make_shared<const Shape>());
  } else {
    for (bool is_sum : {true, false}) {
      for (std::size_t m = 1; m < n; ++m) {
        const auto lefts = shapes_of(m, memo);
        const auto rights = shapes_of(n - m, memo);
        for (const auto& l : lefts) {
          for (const auto& r : rights) out.push_back(std::make_shared<const Shape>(Shape{false, is_sum, l, r, n}));
        }
      }
    }
  }
  memo[n] = std::move(out);
  return memo[n];
}

RingWord instantiate(const Shape& s, const std::vector<RingWord>& alphabet, const std::vector<std::size_t>& digits,
                     std::size_t& cursor) {
  if (s.leaf) return alphabet[digits[cursor++]];
  RingWord l = instantiate(*s.left, alphabet, digits, cursor);
  RingWord r = instantiate(*s.right, alphabet, digits, cursor);
  return s.sum ? RingWord::sum(l, r) : RingWord::prod(l, r);
}

}  // namespace

std::uint64_t word_shape_count(std::size_t length) {
  std::vector<std::vector<ShapePtr>> memo;
  return shapes_of(length, memo).size();
}

OracleResult proximity_oracle(const FinVec& x1, const FinVec& x2, const Environment& env, const Ring& ring,
                              std::size_t r_max, std::uint64_t word_cap) {
  for (const auto& [name, f] : env) {
    if (f.ring() != ring) throw RingMismatch("oracle: generator " + name + " over " + f.ring().spec());
  }
  std::vector<RingWord> alphabet{RingWord::zero(), RingWord::one(), RingWord::neg_one()};
  for (const auto& [name, f] : env) alphabet.push_back(RingWord::gen(name));

  std::vector<std::vector<ShapePtr>> memo;
  std::uint64_t tried = 0;
  for (std::size_t r = 1; r <= r_max; ++r) {
    const auto shapes = shapes_of(r, memo);
    for (const auto& shape : shapes) {
      std::vector<std::size_t> digits(r, 0);
      for (;;) {
        if (++tried > word_cap) {
          throw BoundExceeded("proximity oracle: word cap " + std::to_string(word_cap) + " exceeded at length " +
                              std::to_string(r));
        }
        std::size_t cursor = 0;
        RingWord w = instantiate(*shape, alphabet, digits, cursor);
        if (word_apply(x1, w, env, ring) == x2) return OracleFound{r, w};
        // Odometer, most significant digit first.
        std::size_t pos = r;
        while (pos > 0) {
          --pos;
          if (++digits[pos] < alphabet.size()) break;
          digits[pos] = 0;
          if (pos == 0) {
            pos = r + 1;
            break;
          }
        }
        if (pos == r + 1) break;
      }
    }
  }
  return OracleNotWithin{r_max};
}

}  // namespace rowfin
