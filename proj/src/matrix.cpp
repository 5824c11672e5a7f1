#include "rowfin/matrix.hpp"

#include "rowfin/errors.hpp"

#include <algorithm>
#include <string_view>
#include <istream>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <sstream>
#include <unordered_map>

namespace rowfin {

FinVec::FinVec(const Ring& ring, std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < entries.size(); ++i) {
    if (entries[i].first == entries[i - 1].first) {
      throw Error("FinVec: duplicate index " + std::to_string(entries[i].first));
    }
  }
  for (auto& e : entries) {
    if (e.first == 0) throw Error("FinVec: indices are 1-based");
    if (!ring.is_zero(e.second)) entries_.push_back(std::move(e));
  }
}

FinVec FinVec::unit(const Ring& ring, Index i) { return single(ring, i, ring.one()); }

FinVec FinVec::single(const Ring& ring, Index i, Element value) {
  std::vector<Entry> e;
  e.emplace_back(i, std::move(value));
  return FinVec(ring, std::move(e));
}

const Element* FinVec::find(Index i) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), i,
                             [](const Entry& e, Index key) { return e.first < key; });
  if (it == entries_.end() || it->first != i) return nullptr;
  return &it->second;
}

IndexSet FinVec::support() const {
  IndexSet s;
  for (const auto& e : entries_) s.insert(e.first);
  return s;
}

void VecAccumulator::add(Index i, const Element& v) { pending_.emplace_back(i, v); }

void VecAccumulator::add_scaled(const Element& c, const FinVec& row) {
  const bool unit = ring_.is_one(c);
  for (const auto& [i, v] : row) pending_.emplace_back(i, unit ? v : ring_.mul(c, v));
}

FinVec VecAccumulator::finish() {
  std::stable_sort(pending_.begin(), pending_.end(),
                   [](const FinVec::Entry& a, const FinVec::Entry& b) { return a.first < b.first; });
  std::vector<FinVec::Entry> merged;
  for (auto& e : pending_) {
    if (!merged.empty() && merged.back().first == e.first) {
      merged.back().second = ring_.add(merged.back().second, e.second);
    } else {
      merged.push_back(std::move(e));
    }
  }
  pending_.clear();
  return FinVec(ring_, std::move(merged));
}

FinVec vec_add(const Ring& ring, const FinVec& a, const FinVec& b) {
  VecAccumulator acc(ring);
  for (const auto& [i, v] : a) acc.add(i, v);
  for (const auto& [i, v] : b) acc.add(i, v);
  return acc.finish();
}

FinVec vec_neg(const Ring& ring, const FinVec& a) {
  std::vector<FinVec::Entry> out;
  for (const auto& [i, v] : a) out.emplace_back(i, ring.neg(v));
  return FinVec(ring, std::move(out));
}

FinVec vec_scale(const Ring& ring, const Element& c, const FinVec& x) {
  std::vector<FinVec::Entry> out;
  for (const auto& [i, v] : x) out.emplace_back(i, ring.mul(c, v));
  return FinVec(ring, std::move(out));
}

std::string format_vec(const Ring& ring, const FinVec& x) {
  std::string out = "{";
  bool first = true;
  for (const auto& [i, v] : x) {
    if (!first) out += ", ";
    out += std::to_string(i) + ":" + ring.format(v);
    first = false;
  }
  return out + "}";
}

FinVec parse_vec(const Ring& ring, std::string_view text) {
  std::string body;
  for (char c : text) {
    if (c != '{' && c != '}' && c != ' ') body += c;
  }
  std::vector<FinVec::Entry> entries;
  std::size_t pos = 0;
  while (pos < body.size()) {
    std::size_t comma = pos;
    for (int depth = 0; comma < body.size(); ++comma) {
      if (body[comma] == '[') ++depth;
      if (body[comma] == ']') --depth;
      if (body[comma] == ',' && depth == 0) break;
    }
    const std::string item = body.substr(pos, comma - pos);
    const std::size_t colon = item.find(':');
    if (colon == std::string::npos || colon == 0) throw ParseError("vector: expected index:value, got '" + item + "'");
    Index i = 0;
    for (char c : item.substr(0, colon)) {
      if (c < '0' || c > '9') throw ParseError("vector: bad index in '" + item + "'");
      i = i * 10 + static_cast<Index>(c - '0');
    }
    if (i == 0) throw ParseError("vector: indices are 1-based");
    entries.emplace_back(i, ring.parse_element(item.substr(colon + 1)));
    pos = comma + 1;
  }
  return FinVec(ring, std::move(entries));
}

Window::Window(Index size) : n(size) {
  if (size < 1) throw Error("window size must be >= 1");
}

struct RowFiniteMap::Node {
  Node(Ring r, RowFn f, std::string t) : ring(std::move(r)), fn(std::move(f)), tag(std::move(t)) {}
  Ring ring;
  RowFn fn;
  std::string tag;
  mutable std::shared_mutex mu;
  mutable std::unordered_map<Index, FinVec> memo;
};

RowFiniteMap::RowFiniteMap(Ring ring, RowFn row, std::string tag)
    : node_(std::make_shared<Node>(std::move(ring), std::move(row), std::move(tag))) {}

const FinVec& RowFiniteMap::row(Index alpha) const {
  if (alpha == 0) throw Error("row indices are 1-based");
  {
    std::shared_lock lock(node_->mu);
    auto it = node_->memo.find(alpha);
    if (it != node_->memo.end()) return it->second;
  }
  FinVec computed = node_->fn(alpha);
  std::unique_lock lock(node_->mu);
  return node_->memo.try_emplace(alpha, std::move(computed)).first->second;
}

const Ring& RowFiniteMap::ring() const { return node_->ring; }
const std::string& RowFiniteMap::tag() const { return node_->tag; }

std::size_t RowFiniteMap::rows_computed() const {
  std::shared_lock lock(node_->mu);
  return node_->memo.size();
}

namespace {

std::string combine_tags(const std::string& a, const char* op, const std::string& b) {
  std::string out = "(" + a + op + b + ")";
  if (out.size() > 96) out = out.substr(0, 90) + "...)";
  return out;
}

void require_same_ring(const RowFiniteMap& f, const RowFiniteMap& g) {
  if (f.ring() != g.ring()) {
    throw RingMismatch("ring mismatch: " + f.tag() + " over " + f.ring().spec() + " vs " + g.tag() + " over " +
                       g.ring().spec());
  }
}
}  // namespace

RowFiniteMap rf_identity(const Ring& ring) {
  return RowFiniteMap(ring, [ring](Index a) { return FinVec::unit(ring, a); }, "1");
}

RowFiniteMap rf_zero(const Ring& ring) {
  return RowFiniteMap(ring, [](Index) { return FinVec(); }, "0");
}

RowFiniteMap rf_matrix_unit(const Ring& ring, Index i, Index j) {
  return RowFiniteMap(
      ring, [ring, i, j](Index a) { return a == i ? FinVec::unit(ring, j) : FinVec(); },
      "e" + std::to_string(i) + "," + std::to_string(j));
}

RowFiniteMap rf_projection(const Ring& ring, std::function<bool(Index)> sigma, std::string label) {
  return RowFiniteMap(
      ring, [ring, sigma = std::move(sigma)](Index a) { return sigma(a) ? FinVec::unit(ring, a) : FinVec(); },
      "pi[" + label + "]");
}

RowFiniteMap rf_scalar(const Ring& ring, const Element& c) {
  return RowFiniteMap(
      ring, [ring, c](Index a) { return FinVec::single(ring, a, c); }, "diag(" + ring.format(c) + ")");
}

RowFiniteMap rf_index_map(const Ring& ring, std::function<std::optional<Index>(Index)> map, std::string tag) {
  return RowFiniteMap(
      ring,
      [ring, map = std::move(map)](Index a) {
        auto target = map(a);
        return target ? FinVec::unit(ring, *target) : FinVec();
      },
      std::move(tag));
}

RowFiniteMap rf_shift(const Ring& ring) {
  return rf_index_map(ring, [](Index a) -> std::optional<Index> { return a + 1; }, "shift");
}

RowFiniteMap rf_from_rows(const Ring& ring, RowFiniteMap::RowFn row, std::string tag) {
  return RowFiniteMap(ring, std::move(row), std::move(tag));
}

RowFiniteMap rf_add(const RowFiniteMap& f, const RowFiniteMap& g) {
  require_same_ring(f, g);
  return RowFiniteMap(
      f.ring(), [f, g](Index a) { return vec_add(f.ring(), f.row(a), g.row(a)); },
      combine_tags(f.tag(), " + ", g.tag()));
}

RowFiniteMap rf_neg(const RowFiniteMap& f) {
  return RowFiniteMap(
      f.ring(), [f](Index a) { return vec_neg(f.ring(), f.row(a)); }, "-" + f.tag());
}

RowFiniteMap rf_sub(const RowFiniteMap& f, const RowFiniteMap& g) { return rf_add(f, rf_neg(g)); }

FinVec rf_apply(const FinVec& x, const RowFiniteMap& f) {
  const Ring& ring = f.ring();
  if (x.size() == 1 && ring.is_one(x.entries().front().second)) return f.row(x.entries().front().first);
  VecAccumulator acc(ring);
  for (const auto& [alpha, c] : x) acc.add_scaled(c, f.row(alpha));
  return acc.finish();
}

FinVec rf_apply(const Ring& ring, const FinVec& x, const RowFiniteMap& f) {
  if (ring != f.ring()) throw RingMismatch("rf_apply: vector over " + ring.spec() + ", map over " + f.ring().spec());
  return rf_apply(x, f);
}

RowFiniteMap rf_compose(const RowFiniteMap& f, const RowFiniteMap& g) {
  require_same_ring(f, g);
  return RowFiniteMap(
      f.ring(), [f, g](Index a) { return rf_apply(f.row(a), g); }, combine_tags(f.tag(), " * ", g.tag()));
}

RowFiniteMap rf_compose_all(const std::vector<RowFiniteMap>& chain) {
  if (chain.empty()) throw Error("rf_compose_all: empty chain");
  RowFiniteMap out = chain.front();
  for (std::size_t i = 1; i < chain.size(); ++i) out = rf_compose(out, chain[i]);
  return out;
}

RowFiniteMap rf_pow(const RowFiniteMap& f, std::uint64_t k) {
  if (k == 0) return rf_identity(f.ring());
  RowFiniteMap out = f;
  for (std::uint64_t i = 1; i < k; ++i) out = rf_compose(out, f);
  return out;
}

RowFiniteMap rf_scale(const Element& c, const RowFiniteMap& f) {
  return RowFiniteMap(
      f.ring(), [c, f](Index a) { return vec_scale(f.ring(), c, f.row(a)); },
      f.ring().format(c) + "." + f.tag());
}

RowFiniteMap rf_restrict_rows(const RowFiniteMap& f, std::function<bool(Index)> sigma, std::string label) {
  return RowFiniteMap(
      f.ring(), [f, sigma = std::move(sigma)](Index a) { return sigma(a) ? f.row(a) : FinVec(); },
      "pi[" + label + "]" + f.tag());
}

RowFiniteMap rf_truncate(const RowFiniteMap& f, Index last_row) {
  return rf_restrict_rows(f, [last_row](Index a) { return a <= last_row; }, "<=" + std::to_string(last_row));
}

std::string WindowComparison::describe(const Ring& ring) const {
  if (equal || !first) return "equal";
  return "row " + std::to_string(first->row) + ": got " + format_vec(ring, first->lhs) + ", expected " +
         format_vec(ring, first->rhs);
}

WindowComparison rf_rows_match(const RowFiniteMap& f, Window w, const std::function<FinVec(Index)>& expected) {
  for (Index a = 1; a <= w.n; ++a) {
    const FinVec& got = f.row(a);
    FinVec want = expected(a);
    if (!(got == want)) return WindowComparison{false, Discrepancy{a, got, std::move(want)}};
  }
  return {};
}

WindowComparison rf_equal_on_window(const RowFiniteMap& f, const RowFiniteMap& g, Window w) {
  if (f.ring() != g.ring()) {
    throw RingMismatch("rf_equal_on_window: ring mismatch " + f.ring().spec() + " vs " + g.ring().spec());
  }
  return rf_rows_match(f, w, [&g](Index a) { return g.row(a); });
}

std::vector<std::vector<Element>> rf_window(const RowFiniteMap& f, Window w) {
  Index cols = w.n;
  for (Index a = 1; a <= w.n; ++a) cols = std::max(cols, f.row(a).max_index());
  std::vector<std::vector<Element>> grid(w.n, std::vector<Element>(cols, f.ring().zero()));
  for (Index a = 1; a <= w.n; ++a) {
    for (const auto& [c, v] : f.row(a)) grid[a - 1][c - 1] = v;
  }
  return grid;
}

IndexSet rf_row_support(const RowFiniteMap& f, Index alpha) { return f.row(alpha).support(); }

RowFiniteMap rf_from_sparse(const Ring& ring, const std::vector<SparseTriple>& triples, std::string tag) {
  std::map<Index, std::vector<FinVec::Entry>> rows;
  std::set<std::pair<Index, Index>> seen;
  for (const auto& t : triples) {
    if (t.row == 0 || t.col == 0) throw ParseError("sparse matrix: indices are 1-based");
    if (!seen.emplace(t.row, t.col).second) {
      throw ParseError("sparse matrix: duplicate coordinate (" + std::to_string(t.row) + "," + std::to_string(t.col) + ")");
    }
    rows[t.row].emplace_back(t.col, ring.parse_element(t.value));
  }
  auto table = std::make_shared<std::map<Index, FinVec>>();
  for (auto& [r, entries] : rows) table->emplace(r, FinVec(ring, std::move(entries)));
  return RowFiniteMap(
      ring,
      [table](Index a) {
        auto it = table->find(a);
        return it == table->end() ? FinVec() : it->second;
      },
      std::move(tag));
}

std::vector<SparseTriple> rf_to_sparse(const RowFiniteMap& f, Window w) {
  std::vector<SparseTriple> out;
  for (Index a = 1; a <= w.n; ++a) {
    for (const auto& [c, v] : f.row(a)) out.push_back({a, c, f.ring().format(v)});
  }
  return out;
}

std::string write_sparse(const Ring& ring, const std::vector<SparseTriple>& triples) {
  std::string out = "ring " + ring.spec() + "\n";
  for (const auto& t : triples) out += std::to_string(t.row) + " " + std::to_string(t.col) + " " + t.value + "\n";
  return out;
}

SparseMatrixFile read_sparse(std::istream& in) {
  std::string line;
  std::optional<Ring> ring;
  std::vector<SparseTriple> triples;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    if (!ring) {
      std::string keyword, spec;
      fields >> keyword >> spec;
      if (keyword != "ring" || spec.empty()) throw ParseError("sparse matrix: expected 'ring <spec>' header on line " + std::to_string(line_no));
      ring = Ring::parse(spec);
      continue;
    }
    SparseTriple t{};
    std::string value;
    if (!(fields >> t.row >> t.col >> value)) {
      throw ParseError("sparse matrix: malformed line " + std::to_string(line_no) + ": '" + line + "'");
    }
    std::string rest;
    if (fields >> rest) throw ParseError("sparse matrix: trailing text on line " + std::to_string(line_no));
    t.value = value;
    triples.push_back(std::move(t));
  }
  if (!ring) throw ParseError("sparse matrix: missing 'ring <spec>' header");
  return {*ring, std::move(triples)};
}

SparseMatrixFile read_sparse_text(const std::string& text) {
  std::istringstream in(text);
  return read_sparse(in);
}

namespace {

RowFiniteMap random_in_band(const Ring& ring, std::mt19937_64& rng, Index rows, double density, std::string tag,
                            const std::function<std::pair<Index, Index>(Index)>& band) {
  const auto threshold = static_cast<std::uint64_t>(density * 1'000'000.0);
  std::vector<SparseTriple> triples;
  for (Index r = 1; r <= rows; ++r) {
    auto [lo, hi] = band(r);
    for (Index c = lo; c <= hi; ++c) {
      if (uniform_below(rng, 1'000'000) >= threshold) continue;
      Element v = ring.random(rng);
      if (ring.is_zero(v)) continue;
      triples.push_back({r, c, ring.format(v)});
    }
  }
  return rf_from_sparse(ring, triples, std::move(tag));
}

}  // namespace

RowFiniteMap rf_random_finite(const Ring& ring, std::mt19937_64& rng, Index rows, Index cols, double density,
                              std::string tag) {
  return random_in_band(ring, rng, rows, density, std::move(tag), [cols](Index) { return std::pair<Index, Index>{1, cols}; });
}

RowFiniteMap rf_random_lower(const Ring& ring, std::mt19937_64& rng, Index n, double density, std::string tag) {
  return random_in_band(ring, rng, n, density, std::move(tag), [](Index r) { return std::pair<Index, Index>{1, r}; });
}

RowFiniteMap rf_random_upper(const Ring& ring, std::mt19937_64& rng, Index n, double density, std::string tag) {
  return random_in_band(ring, rng, n, density, std::move(tag), [n](Index r) { return std::pair<Index, Index>{r, n}; });
}

}  // namespace rowfin
