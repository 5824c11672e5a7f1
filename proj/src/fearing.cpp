#include "rowfin/fearing.hpp"

#include "rowfin/errors.hpp"
#include "rowfin/sandwich.hpp"
#include "rowfin/twogen.hpp"

#include <algorithm>
#include <mutex>
#include <random>

namespace rowfin {

namespace {

std::mt19937_64 row_rng(std::uint64_t seed, Index row) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(row), static_cast<std::uint32_t>(row >> 32)};
  return std::mt19937_64(seq);
}

RowFiniteMap sampled(const Ring& ring, std::uint64_t seed, std::string tag,
                     std::function<std::vector<Index>(Index)> columns) {
  return rf_from_rows(
      ring,
      [ring, seed, columns = std::move(columns)](Index a) {
        auto rng = row_rng(seed, a);
        std::vector<FinVec::Entry> out;
        for (Index c : columns(a)) {
          if (uniform_below(rng, 2) == 0) continue;
          out.emplace_back(c, ring.random(rng));
        }
        return FinVec(ring, std::move(out));
      },
      std::move(tag));
}

IndexSet finite_or_throw(const Support& s, Index a, const std::string& who) {
  if (!is_finite(s)) {
    throw PreconditionViolation(who + ": row " + std::to_string(a) + " has an infinite support bound");
  }
  return std::get<IndexSet>(s);
}

}  // namespace

std::function<FearingDescriptor::Violation(const RowFiniteMap&, Window)> support_violation(
    std::function<Support(Index)> supp) {
  return [supp = std::move(supp)](const RowFiniteMap& f, Window w) -> FearingDescriptor::Violation {
    for (Index a = 1; a <= w.n; ++a) {
      const FinVec& row = f.row(a);
      if (row.empty()) continue;
      const Support s = supp(a);
      for (const auto& [b, v] : row) {
        if (!support_contains(s, b)) return std::pair{a, b};
      }
    }
    return std::nullopt;
  };
}

FearingDescriptor FearingDescriptor::diagonal(const Ring& ring) {
  auto supp = [](Index a) -> Support { return IndexSet{a}; };
  return FearingDescriptor{"D", ring, supp, IndexSet{}, support_violation(supp), [ring](std::uint64_t seed) {
                             return sampled(ring, seed, "diag-sample", [](Index a) { return std::vector<Index>{a}; });
                           }};
}

FearingDescriptor FearingDescriptor::banded(const Ring& ring) {
  auto supp = [](Index k) -> Support {
    IndexSet s;
    for (Index c = 1; c <= 2 * k; ++c) s.insert(c);
    return s;
  };
  return FearingDescriptor{"banded", ring, supp, IndexSet{}, support_violation(supp), [ring](std::uint64_t seed) {
                             return sampled(ring, seed, "banded-sample", [](Index k) {
                               std::vector<Index> cols;
                               for (Index c = 1; c <= 2 * k; ++c) cols.push_back(c);
                               return cols;
                             });
                           }};
}

FearingDescriptor FearingDescriptor::from_preorder(const Ring& ring, const Preorder& rho) {
  auto supp = [rho](Index a) { return rho.upset(a); };
  auto columns = [rho](Index a) -> std::vector<Index> {
    const Support s = rho.upset(a);
    if (is_finite(s)) {
      const auto& set = std::get<IndexSet>(s);
      return {set.begin(), set.end()};
    }
    return std::get<InfiniteSet>(s).prefix(4);
  };
  return FearingDescriptor{"E(" + rho.name() + ")", ring, supp, rho.infinite_upset_indices(), support_violation(supp),
                           [ring, columns, name = rho.name()](std::uint64_t seed) {
                             return sampled(ring, seed, "sample(" + name + ")", columns);
                           }};
}

WeakFearSplit split_weak_fearing(const FearingDescriptor& S) {
  if (!is_finite(S.infinite_rows)) {
    throw PreconditionViolation("split: " + S.name + " has infinitely many rows with infinite support");
  }
  const IndexSet sigma = std::get<IndexSet>(S.infinite_rows);
  auto in_sigma = [sigma](Index a) { return sigma.count(a) > 0; };

  auto prime_supp = [sigma, base = S.supp](Index a) -> Support {
    if (sigma.count(a)) return IndexSet{a};
    return base(a);
  };
  auto dprime_supp = [sigma, base = S.supp](Index a) -> Support {
    if (sigma.count(a)) return base(a);
    return IndexSet{a};
  };
  FearingDescriptor prime{S.name + "'", S.ring, prime_supp, IndexSet{}, support_violation(prime_supp),
                          [sample = S.sample, in_sigma](std::uint64_t seed) {
                            return rf_restrict_rows(
                                sample(seed), [in_sigma](Index a) { return !in_sigma(a); }, "off-sigma");
                          }};
  FearingDescriptor dprime{S.name + "''", S.ring, dprime_supp, sigma, support_violation(dprime_supp),
                           [sample = S.sample, in_sigma](std::uint64_t seed) {
                             return rf_restrict_rows(sample(seed), in_sigma, "sigma");
                           }};
  return WeakFearSplit{sigma, std::move(prime), std::move(dprime)};
}

CheckList verify_split(const WeakFearSplit& split, const FearingDescriptor& S, std::size_t samples, Window w,
                       std::uint64_t seed, const std::function<void(TwoGenWitness&)>& tamper) {
  CheckList checks;
  const Ring& ring = S.ring;
  const IndexSet sigma = split.sigma;
  auto in_sigma = [sigma](Index a) { return sigma.count(a) > 0; };

  std::vector<RowFiniteMap> fs;
  std::set<std::pair<Index, Index>> units;
  for (std::size_t s = 0; s < samples; ++s) {
    fs.push_back(S.sample(seed + s));
    for (Index a : sigma) {
      for (const auto& [b, v] : fs.back().row(a)) units.emplace(a, b);
    }
  }

  SourceFamily family;
  std::map<std::pair<Index, Index>, std::int64_t> unit_index;
  for (auto [a, b] : units) {
    const std::int64_t i = zunfold(cantor_pair(a, b));
    family.emplace(i, rf_matrix_unit(ring, a, b));
    unit_index[{a, b}] = i;
  }
  GFamily gf = build_g_family(ring, family);
  TwoGenWitness tg = build_two_generators(gf);
  if (tamper) tamper(tg);
  WordEvaluator ev(ring, tg.env());

  for (std::size_t s = 0; s < samples; ++s) {
    const RowFiniteMap& f = fs[s];
    const std::string tag = "sample " + std::to_string(s) + ": ";
    RowFiniteMap outside = rf_restrict_rows(
        f, [in_sigma](Index a) { return !in_sigma(a); }, "off-sigma");
    RowFiniteMap inside = rf_restrict_rows(f, in_sigma, "sigma");
    checks.add(tag + "parts re-sum", rf_equal_on_window(rf_add(outside, inside), f, w), ring);
    auto bad1 = split.s_prime.first_violation(outside, w);
    checks.add(tag + "off-sigma part in S'", !bad1,
               bad1 ? "entry (" + std::to_string(bad1->first) + "," + std::to_string(bad1->second) + ")" : "");
    auto bad2 = split.s_double_prime.first_violation(inside, w);
    checks.add(tag + "sigma part in S''", !bad2,
               bad2 ? "entry (" + std::to_string(bad2->first) + "," + std::to_string(bad2->second) + ")" : "");

    RowFiniteMap rebuilt = rf_zero(ring);
    for (Index a : sigma) {
      for (const auto& [b, v] : f.row(a)) {
        RowFiniteMap unit = ev.eval(tg.word_for_u(unit_index.at({a, b})));
        rebuilt = rf_add(rebuilt, rf_compose(rf_scalar(ring, v), unit));
      }
    }
    checks.add(tag + "sigma part from diagonals and unit words", rf_equal_on_window(rebuilt, inside, w), ring);
  }
  return checks;
}

namespace {

class LevelSequence {
 public:
  explicit LevelSequence(std::function<Support(Index)> supp) : supp_(std::move(supp)) {}

  Index at(Index k) {
    std::lock_guard lock(mu_);
    extend_to(k);
    return levels_[k - 1];
  }

  std::optional<Index> position(Index m) {
    std::lock_guard lock(mu_);
    while (levels_.empty() || levels_.back() < m) extend_to(levels_.size() + 1);
    auto it = std::lower_bound(levels_.begin(), levels_.end(), m);
    if (*it != m) return std::nullopt;
    return static_cast<Index>(it - levels_.begin()) + 1;
  }

 private:
  void extend_to(Index k) {
    while (levels_.size() < k) {
      const Index j = levels_.size() + 1;
      const IndexSet s = finite_or_throw(supp_(j), j, "lower embed");
      if (!s.empty()) running_max_ = std::max(running_max_, *s.rbegin());
      const Index prev = levels_.empty() ? 0 : levels_.back();
      levels_.push_back(std::max(running_max_, prev + 1));
    }
  }

  std::function<Support(Index)> supp_;
  std::mutex mu_;
  std::vector<Index> levels_;
  Index running_max_ = 0;
};

}  // namespace

LowerEmbed fear_lower_embed(const FearingDescriptor& S) {
  if (!is_finite(S.infinite_rows) || !std::get<IndexSet>(S.infinite_rows).empty()) {
    throw PreconditionViolation("lower embed: " + S.name + " has rows with infinite support");
  }
  auto levels = std::make_shared<LevelSequence>(S.supp);
  return LowerEmbed{[levels](Index k) { return levels->at(k); },
                    rf_index_map(
                        S.ring, [levels](Index m) { return levels->position(m); }, "f"),
                    rf_index_map(
                        S.ring, [levels](Index k) -> std::optional<Index> { return levels->at(k); }, "g")};
}

CheckList verify_lower_embed(const LowerEmbed& le, const FearingDescriptor& S, std::size_t samples, Window w,
                             std::uint64_t seed) {
  CheckList checks;
  const Ring& ring = S.ring;
  checks.add("g f = 1", rf_equal_on_window(rf_compose(le.g, le.f), rf_identity(ring), w), ring);
  const Window tall(le.level(w.n));
  for (std::size_t s = 0; s < samples; ++s) {
    const RowFiniteMap h = S.sample(seed + s);
    const RowFiniteMap fh = rf_compose(le.f, h);
    const std::string tag = "sample " + std::to_string(s) + ": ";
    auto bad = first_above_diagonal(fh, tall);
    checks.add(tag + "f h lower-triangular", !bad,
               bad ? "entry (" + std::to_string(bad->first) + "," + std::to_string(bad->second) + ")" : "");
    checks.add(tag + "g (f h) = h", rf_equal_on_window(rf_compose(le.g, fh), h, w), ring);
  }
  return checks;
}

FearWitness fear_witness(const FearingDescriptor& S, const Environment& U, std::size_t J) {
  std::vector<SupportStep> steps;
  steps.push_back(SupportStep{S.name, [supp = S.supp](Index a) { return finite_or_throw(supp(a), a, "fear witness"); }});
  for (const auto& [name, u] : U) {
    if (u.ring() != S.ring) throw RingMismatch("fear witness: " + name + " is over " + u.ring().spec());
    steps.push_back(map_step(name, u));
  }

  FearWitness fw{{}, rf_zero(S.ring)};
  Index frontier = 0;
  for (std::size_t j = 1; j <= J; ++j) {
    FearStep st;
    st.m = frontier + 1;
    st.x = FinVec::unit(S.ring, st.m);
    SupportBallReport ball = support_closure(st.x, steps, j);
    st.cover = std::move(ball.cover);
    st.contributors = std::move(ball.contributors);
    st.escape = std::max(st.cover.empty() ? 0 : *st.cover.rbegin(), frontier) + 1;
    st.y = FinVec::unit(S.ring, st.escape);
    st.block = {st.m, st.escape};
    frontier = st.escape;
    fw.steps.push_back(std::move(st));
  }
  std::map<Index, Index> jump;
  for (const auto& st : fw.steps) jump[st.m] = st.escape;
  fw.g = rf_index_map(
      S.ring,
      [jump](Index k) -> std::optional<Index> {
        auto it = jump.find(k);
        if (it == jump.end()) return std::nullopt;
        return it->second;
      },
      "escape");
  return fw;
}

CheckList verify_fear_witness(const FearWitness& fw) {
  CheckList checks;
  IndexSet used;
  for (std::size_t j = 0; j < fw.steps.size(); ++j) {
    const FearStep& st = fw.steps[j];
    const std::string tag = "j=" + std::to_string(j + 1) + ": ";
    checks.add(tag + "escape outside cover", !st.cover.count(st.escape),
               "escape " + std::to_string(st.escape) + " lies in the cover");
    checks.add(tag + "escape in support(y)", st.y.find(st.escape) != nullptr, "y misses the escape coordinate");
    bool inside = true;
    for (Index k : st.x.support()) inside = inside && st.block.count(k);
    for (Index k : st.y.support()) inside = inside && st.block.count(k);
    checks.add(tag + "supports inside block", inside, "x or y leaves its block");
    bool disjoint = true;
    for (Index k : st.block) disjoint = disjoint && !used.count(k);
    used.insert(st.block.begin(), st.block.end());
    checks.add(tag + "block disjoint from earlier blocks", disjoint, "block overlaps an earlier one");
    const FinVec xg = rf_apply(st.x, fw.g);
    checks.add(tag + "x g = y", xg == st.y, "x g has support of size " + std::to_string(xg.size()));
  }
  return checks;
}

Environment diagonal_representatives(const Ring& ring, const IndexSet& coords, std::uint64_t limit) {
  auto order = ring.order();
  if (!order) throw PreconditionViolation("diagonal representatives need a finite ring, got " + ring.spec());
  std::uint64_t count = 1;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (count > limit / *order) {
      throw BoundExceeded("diagonal representatives: more than " + std::to_string(limit) + " maps");
    }
    count *= *order;
  }
  const std::vector<Index> cs(coords.begin(), coords.end());
  Environment env;
  for (std::uint64_t code = 0; code < count; ++code) {
    std::map<Index, Element> entries;
    std::uint64_t rest = code;
    for (Index c : cs) {
      entries.emplace(c, ring.element_at(rest % *order));
      rest /= *order;
    }
    std::string digits = std::to_string(code);
    const std::string name = "d" + std::string(digits.size() < 4 ? 4 - digits.size() : 0, '0') + digits;
    env.emplace(name, rf_from_rows(
                          ring,
                          [ring, entries](Index a) -> FinVec {
                            auto it = entries.find(a);
                            if (it == entries.end()) return {};
                            return FinVec::single(ring, a, it->second);
                          },
                          name));
  }
  return env;
}

CheckList confirm_fear_by_oracle(const FearWitness& fw, const Environment& U, const Ring& ring, std::size_t jmax,
                                 std::uint64_t word_cap) {
  CheckList checks;
  for (std::size_t j = 1; j <= jmax && j <= fw.steps.size(); ++j) {
    const FearStep& st = fw.steps[j - 1];
    Environment env = diagonal_representatives(ring, st.cover);
    for (const auto& [name, u] : U) env.emplace(name, u);
    OracleResult r = proximity_oracle(st.x, st.y, env, ring, j, word_cap);
    std::string detail;
    if (auto* found = std::get_if<OracleFound>(&r)) {
      detail = "reached at length " + std::to_string(found->length) + " by " + found->witness.str();
    }
    checks.add("j=" + std::to_string(j) + ": oracle finds no word of length <= " + std::to_string(j),
               std::holds_alternative<OracleNotWithin>(r), detail);
  }
  return checks;
}

}  // namespace rowfin
