#include "rowfin/preorder.hpp"

#include "rowfin/errors.hpp"
#include "rowfin/ring.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <random>
#include <sstream>

namespace rowfin {

bool support_contains(const Support& s, Index k) {
  if (const auto* fin = std::get_if<IndexSet>(&s)) return fin->count(k) > 0;
  return std::get<InfiniteSet>(s).contains(k);
}

std::string describe(const Support& s) {
  if (const auto* fin = std::get_if<IndexSet>(&s)) {
    std::string out = "{";
    bool first = true;
    for (Index k : *fin) {
      if (!first) out += ",";
      out += std::to_string(k);
      first = false;
    }
    return out + "}";
  }
  return "infinite:" + std::get<InfiniteSet>(s).label();
}

std::string to_string(RefinementBranch b) { return b == RefinementBranch::Nested ? "Nested" : "Disjoint"; }

Preorder::Preorder(std::string name, Relation rel, UpsetFn upset, Support infinite_upset_indices,
                   std::optional<Refinement> refinement)
    : name_(std::move(name)),
      rel_(std::move(rel)),
      upset_(std::move(upset)),
      infinite_(std::move(infinite_upset_indices)),
      refinement_(std::move(refinement)) {}

Preorder Preorder::with_infinite_tag(Support tag) const {
  Preorder copy = *this;
  copy.infinite_ = std::move(tag);
  return copy;
}

namespace {

Refinement tail_nested() {
  Refinement r;
  r.branch = RefinementBranch::Nested;
  r.anchor = [](Index j) { return j; };
  r.bars = [](Index j) { return InfiniteSet::tail(j); };
  return r;
}

// Union of residue classes mod m (residue 0 stands for multiples of m).
InfiniteSet residue_union(Index m, const std::set<Index>& residues) {
  std::vector<Index> reps;
  for (Index r : residues) reps.push_back(r == 0 ? m : r);
  std::sort(reps.begin(), reps.end());
  std::string label = "mod " + std::to_string(m) + " classes {";
  for (std::size_t i = 0; i < reps.size(); ++i) label += (i ? "," : "") + std::to_string(reps[i] % m);
  label += "}";
  return InfiniteSet(
      [m, reps](Index j) {
        const Index n = reps.size();
        return ((j - 1) / n) * m + reps[(j - 1) % n];
      },
      [m, residues](Index k) { return residues.count(k % m) > 0; }, std::move(label));
}

InfiniteSet with_point(const InfiniteSet& base, Index point) {
  if (base.contains(point)) return base;
  const Index below = base.members_upto(point - 1).size();
  return InfiniteSet(
      [base, point, below](Index j) {
        if (j <= below) return base.nth(j);
        if (j == below + 1) return point;
        return base.nth(j - 1);
      },
      [base, point](Index k) { return k == point || base.contains(k); }, base.label() + " + {" + std::to_string(point) + "}");
}

std::vector<std::pair<Index, Index>> parse_pairs(std::string_view text, std::string_view what) {
  const std::string prefix = "preorder " + std::string(what) + ": ";
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto expect = [&](char c) {
    skip();
    if (pos >= text.size() || text[pos] != c) {
      throw ParseError(prefix + "expected '" + std::string(1, c) + "' at position " + std::to_string(pos) + " in '" +
                       std::string(text) + "'");
    }
    ++pos;
  };
  auto number = [&] {
    skip();
    const std::size_t first = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (first == pos) throw ParseError(prefix + "expected a number at position " + std::to_string(first));
    return static_cast<Index>(std::stoull(std::string(text.substr(first, pos - first))));
  };
  skip();
  const bool braced = pos < text.size() && text[pos] == '{';
  if (braced) ++pos;
  std::vector<std::pair<Index, Index>> out;
  skip();
  while (pos < text.size() && text[pos] == '(') {
    ++pos;
    const Index a = number();
    expect(',');
    const Index b = number();
    expect(')');
    out.emplace_back(a, b);
    skip();
    if (pos < text.size() && text[pos] == ',') {
      ++pos;
      skip();
      if (pos >= text.size() || text[pos] != '(') throw ParseError(prefix + "expected a pair after ','");
    }
  }
  if (braced) expect('}');
  skip();
  if (pos != text.size()) {
    throw ParseError(prefix + "unexpected character '" + std::string(1, text[pos]) + "' at position " + std::to_string(pos));
  }
  return out;
}

std::string format_pairs(const std::vector<std::pair<Index, Index>>& pairs) {
  std::string out = "{";
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (i) out += ",";
    out += "(" + std::to_string(pairs[i].first) + "," + std::to_string(pairs[i].second) + ")";
  }
  return out + "}";
}

// Transitive closure of a relation on a finite vertex set, as adjacency sets.
std::map<Index, std::set<Index>> transitive_closure(const std::vector<std::pair<Index, Index>>& pairs) {
  std::map<Index, std::set<Index>> reach;
  for (auto [a, b] : pairs) reach[a].insert(b);
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto& [a, targets] : reach) {
      std::set<Index> extra;
      for (Index b : targets) {
        auto it = reach.find(b);
        if (it == reach.end()) continue;
        for (Index c : it->second) {
          if (!targets.count(c)) extra.insert(c);
        }
      }
      if (!extra.empty()) {
        targets.insert(extra.begin(), extra.end());
        changed = true;
      }
    }
  }
  return reach;
}

}  // namespace

Preorder Preorder::diagonal() {
  return Preorder(
      "diag", [](Index a, Index b) { return a == b; }, [](Index a) -> Support { return IndexSet{a}; }, IndexSet{});
}

Preorder Preorder::less_equal() {
  return Preorder(
      "le", [](Index a, Index b) { return a <= b; }, [](Index a) -> Support { return InfiniteSet::tail(a); },
      InfiniteSet::naturals(), tail_nested());
}

Preorder Preorder::greater_equal() {
  return Preorder(
      "ge", [](Index a, Index b) { return a >= b; },
      [](Index a) -> Support {
        IndexSet s;
        for (Index b = 1; b <= a; ++b) s.insert(b);
        return s;
      },
      IndexSet{});
}

Preorder Preorder::full() {
  return Preorder(
      "full", [](Index, Index) { return true; }, [](Index) -> Support { return InfiniteSet::naturals(); },
      InfiniteSet::naturals(), tail_nested());
}

Preorder Preorder::modular(Index m, const std::vector<std::pair<Index, Index>>& class_pairs) {
  if (m < 1) throw ParseError("preorder mod: modulus must be >= 1");
  for (auto [a, b] : class_pairs) {
    if (a >= m || b >= m) throw ParseError("preorder mod: class index out of range 0.." + std::to_string(m - 1));
  }
  auto closure = transitive_closure(class_pairs);
  std::map<Index, std::set<Index>> reach;
  for (Index c = 0; c < m; ++c) reach[c] = closure.count(c) ? closure[c] : std::set<Index>{};

  auto rel = [m, reach](Index a, Index b) { return a == b || reach.at(a % m).count(b % m) > 0; };
  std::map<Index, InfiniteSet> targets;
  std::set<Index> sources;
  for (const auto& [c, r] : reach) {
    if (r.empty()) continue;
    targets.emplace(c, residue_union(m, r));
    sources.insert(c);
  }
  auto upset = [m, targets](Index a) -> Support {
    auto it = targets.find(a % m);
    if (it == targets.end()) return IndexSet{a};
    return with_point(it->second, a);
  };

  std::string name = "mod:" + std::to_string(m) + ":" + format_pairs(class_pairs);
  if (sources.empty()) return Preorder(std::move(name), rel, upset, IndexSet{});

  // Anchor class: the source class whose least member is smallest.
  Index anchor_class = *sources.begin();
  auto rep = [m](Index c) { return c == 0 ? m : c; };
  for (Index c : sources) {
    if (rep(c) < rep(anchor_class)) anchor_class = c;
  }
  const InfiniteSet target = targets.at(anchor_class);
  Refinement refinement;
  refinement.branch = RefinementBranch::Disjoint;
  refinement.anchor = [m, first = rep(anchor_class)](Index j) { return first + (j - 1) * m; };
  refinement.bars = [target](Index j) { return pairing_slice(target, j); };
  refinement.locate = [target](Index b) -> std::optional<std::pair<Index, Index>> {
    auto pos = target.position(b);
    if (!pos) return std::nullopt;
    return cantor_unpair(*pos);
  };
  return Preorder(std::move(name), rel, upset, residue_union(m, sources), std::move(refinement));
}

Preorder Preorder::union_finite(const std::vector<std::pair<Index, Index>>& pairs) {
  for (auto [a, b] : pairs) {
    if (a == 0 || b == 0) throw ParseError("preorder union-finite: indices are 1-based");
  }
  auto closure = transitive_closure(pairs);
  auto rel = [closure](Index a, Index b) {
    if (a == b) return true;
    auto it = closure.find(a);
    return it != closure.end() && it->second.count(b) > 0;
  };
  auto upset = [closure](Index a) -> Support {
    IndexSet s{a};
    if (auto it = closure.find(a); it != closure.end()) s.insert(it->second.begin(), it->second.end());
    return s;
  };
  return Preorder("union-finite:" + format_pairs(pairs), rel, upset, IndexSet{});
}

Preorder Preorder::star(Index root) {
  if (root == 0) throw Error("star: root must be positive");
  return Preorder(
      "star:" + std::to_string(root), [root](Index a, Index b) { return a == b || a == root; },
      [root](Index a) -> Support {
        if (a == root) return InfiniteSet::naturals();
        return IndexSet{a};
      },
      IndexSet{root});
}

Preorder Preorder::parse(std::string_view dsl) {
  while (!dsl.empty() && std::isspace(static_cast<unsigned char>(dsl.front()))) dsl.remove_prefix(1);
  while (!dsl.empty() && std::isspace(static_cast<unsigned char>(dsl.back()))) dsl.remove_suffix(1);
  if (dsl == "diag") return diagonal();
  if (dsl == "le") return less_equal();
  if (dsl == "ge") return greater_equal();
  if (dsl == "full") return full();
  if (dsl.substr(0, 4) == "mod:") {
    auto rest = dsl.substr(4);
    auto colon = rest.find(':');
    auto m_text = rest.substr(0, colon);
    if (m_text.empty() || !std::all_of(m_text.begin(), m_text.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      throw ParseError("preorder mod: expected mod:<m>:<pairs>");
    }
    Index m = std::stoull(std::string(m_text));
    auto pairs = colon == std::string_view::npos ? std::vector<std::pair<Index, Index>>{} : parse_pairs(rest.substr(colon + 1), "mod");
    return modular(m, pairs);
  }
  if (dsl.substr(0, 13) == "union-finite:") return union_finite(parse_pairs(dsl.substr(13), "union-finite"));
  throw ParseError("preorder: unrecognized descriptor '" + std::string(dsl) + "'");
}

std::vector<std::string> spot_check(const Preorder& rho, const SpotCheckBounds& bounds) {
  std::vector<std::string> problems;
  const Index n = bounds.relation_bound;
  for (Index a = 1; a <= n; ++a) {
    if (!rho.rel(a, a)) problems.push_back("not reflexive at " + std::to_string(a));
  }
  std::mt19937_64 rng(bounds.seed);
  for (std::size_t t = 0; t < bounds.transitive_trials; ++t) {
    Index a = 1 + uniform_below(rng, n), b = 1 + uniform_below(rng, n), c = 1 + uniform_below(rng, n);
    if (rho.rel(a, b) && rho.rel(b, c) && !rho.rel(a, c)) {
      problems.push_back("not transitive: (" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + ")");
      break;
    }
  }
  for (Index a = 1; a <= n; ++a) {
    Support up = rho.upset(a);
    for (Index b = 1; b <= n; ++b) {
      if (rho.rel(a, b) != support_contains(up, b)) {
        problems.push_back("upset(" + std::to_string(a) + ") disagrees with relation at " + std::to_string(b));
        break;
      }
    }
    if (const auto* inf = std::get_if<InfiniteSet>(&up)) {
      for (Index j = 1; j <= 3 * n; ++j) {
        if (!rho.rel(a, inf->nth(j))) {
          problems.push_back("upset(" + std::to_string(a) + ") enumerates unrelated " + std::to_string(inf->nth(j)));
          break;
        }
      }
    }
    const bool tagged_infinite = support_contains(rho.infinite_upset_indices(), a);
    if (tagged_infinite == is_finite(up)) {
      problems.push_back("infinite-upset tag inconsistent at " + std::to_string(a));
    }
  }
  if (const auto& ref = rho.refinement()) {
    const Index J = bounds.refinement_bars;
    std::set<Index> anchors;
    std::vector<std::vector<Index>> prefixes;
    for (Index j = 1; j <= J; ++j) {
      Index alpha = ref->anchor(j);
      if (!anchors.insert(alpha).second) problems.push_back("refinement anchors repeat at j=" + std::to_string(j));
      if (!support_contains(rho.infinite_upset_indices(), alpha)) {
        problems.push_back("refinement anchor " + std::to_string(alpha) + " lacks an infinite up-set");
      }
      InfiniteSet bar = ref->bars(j);
      prefixes.push_back(bar.prefix(bounds.bar_prefix));
      for (Index b : prefixes.back()) {
        if (!rho.rel(alpha, b)) {
          problems.push_back("bars(" + std::to_string(j) + ") not inside upset of anchor at " + std::to_string(b));
          break;
        }
      }
    }
    for (Index j = 1; j <= J; ++j) {
      for (Index jp = 1; jp <= J; ++jp) {
        if (j == jp) continue;
        InfiniteSet other = ref->bars(jp);
        for (Index b : prefixes[j - 1]) {
          if (ref->branch == RefinementBranch::Nested && jp < j && !other.contains(b)) {
            problems.push_back("nested refinement broken: bars(" + std::to_string(j) + ") not in bars(" + std::to_string(jp) + ")");
            break;
          }
          if (ref->branch == RefinementBranch::Disjoint && other.contains(b)) {
            problems.push_back("disjoint refinement broken: bars(" + std::to_string(j) + ") meets bars(" + std::to_string(jp) + ")");
            break;
          }
        }
      }
      if (ref->branch == RefinementBranch::Disjoint && ref->locate) {
        for (std::size_t k = 0; k < prefixes[j - 1].size(); ++k) {
          auto where = ref->locate(prefixes[j - 1][k]);
          if (!where || where->first != j || where->second != k + 1) {
            problems.push_back("refinement locate disagrees with bars(" + std::to_string(j) + ")");
            break;
          }
        }
      }
    }
  }
  return problems;
}

}  // namespace rowfin
