#include "rowfin/indexing.hpp"

#include "rowfin/errors.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

namespace rowfin {

Index zfold(std::int64_t i) {
  return i >= 0 ? static_cast<Index>(2 * i + 1) : static_cast<Index>(-2 * i);
}

std::int64_t zunfold(Index k) {
  if (k == 0) throw Error("zunfold: index must be positive");
  return k % 2 == 1 ? static_cast<std::int64_t>((k - 1) / 2) : -static_cast<std::int64_t>(k / 2);
}

Index cantor_pair(Index a, Index b) {
  if (a == 0 || b == 0) throw Error("cantor_pair: arguments must be positive");
  const Index x = a - 1;
  const Index y = b - 1;
  return (x + y) * (x + y + 1) / 2 + y + 1;
}

std::pair<Index, Index> cantor_unpair(Index k) {
  if (k == 0) throw Error("cantor_unpair: index must be positive");
  const Index z = k - 1;
  auto w = static_cast<Index>((std::sqrt(8.0 * static_cast<double>(z) + 1.0) - 1.0) / 2.0);
  // Correct the floating estimate of the diagonal.
  while (w * (w + 1) / 2 > z) --w;
  while ((w + 1) * (w + 2) / 2 <= z) ++w;
  const Index y = z - w * (w + 1) / 2;
  const Index x = w - y;
  return {x + 1, y + 1};
}

InfiniteSet::InfiniteSet(NthFn nth, ContainsFn contains, std::string label)
    : nth_(std::make_shared<const NthFn>(std::move(nth))),
      contains_(std::make_shared<const ContainsFn>(std::move(contains))),
      label_(std::make_shared<const std::string>(std::move(label))) {}

InfiniteSet InfiniteSet::naturals() {
  return InfiniteSet([](Index j) { return j; }, [](Index k) { return k >= 1; }, "N+");
}

InfiniteSet InfiniteSet::arithmetic(Index first, Index step) {
  if (first == 0 || step == 0) throw Error("arithmetic progression needs positive first and step");
  return InfiniteSet([first, step](Index j) { return first + (j - 1) * step; },
                     [first, step](Index k) { return k >= first && (k - first) % step == 0; },
                     std::to_string(first) + "+" + std::to_string(step) + "N");
}

InfiniteSet InfiniteSet::powers(Index base) {
  if (base < 2) throw Error("powers: base must be >= 2");
  return InfiniteSet(
      [base](Index j) {
        Index v = 1;
        for (Index e = 1; e < j; ++e) v *= base;
        return v;
      },
      [base](Index k) {
        if (k == 0) return false;
        while (k % base == 0) k /= base;
        return k == 1;
      },
      "powers of " + std::to_string(base));
}

InfiniteSet InfiniteSet::tail(Index first) {
  if (first == 0) throw Error("tail: first must be positive");
  return InfiniteSet([first](Index j) { return first + j - 1; }, [first](Index k) { return k >= first; },
                     ">=" + std::to_string(first));
}

InfiniteSet InfiniteSet::from_nth(NthFn nth, std::string label) {
  auto shared = std::make_shared<NthFn>(std::move(nth));
  InfiniteSet probe([shared](Index j) { return (*shared)(j); }, [](Index) { return false; }, label);
  return InfiniteSet([shared](Index j) { return (*shared)(j); },
                     [probe](Index k) { return probe.position(k).has_value(); }, std::move(label));
}

Index InfiniteSet::nth(Index j) const {
  if (j == 0) throw Error("InfiniteSet::nth is 1-based");
  return (*nth_)(j);
}

bool InfiniteSet::contains(Index k) const { return k >= 1 && (*contains_)(k); }

std::optional<Index> InfiniteSet::position(Index k) const {
  if (k == 0) return std::nullopt;
  // Galloping search; nth is strictly increasing, so nth(j) >= j.
  Index hi = 1;
  while (nth(hi) < k) {
    if (hi > k) return std::nullopt;
    hi *= 2;
  }
  Index lo = hi / 2 + 1;
  if (hi == 1) lo = 1;
  while (lo < hi) {
    Index mid = lo + (hi - lo) / 2;
    if (nth(mid) < k) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (nth(lo) == k) return lo;
  return std::nullopt;
}

std::vector<Index> InfiniteSet::prefix(std::size_t count) const {
  std::vector<Index> out;
  out.reserve(count);
  for (std::size_t j = 1; j <= count; ++j) out.push_back(nth(j));
  return out;
}

std::vector<Index> InfiniteSet::members_upto(Index bound) const {
  std::vector<Index> out;
  for (Index j = 1;; ++j) {
    Index v = nth(j);
    if (v > bound) break;
    out.push_back(v);
  }
  return out;
}

std::optional<Index> OrderIso::operator()(Index k) const {
  auto j = src_.position(k);
  if (!j) return std::nullopt;
  return dst_.nth(*j);
}

std::optional<Index> OrderIso::inverse(Index m) const {
  auto j = dst_.position(m);
  if (!j) return std::nullopt;
  return src_.nth(*j);
}

InfiniteSet SevenPartition::piece(int i) const {
  if (i < 1 || i > 7) throw Error("seven_partition: piece index must be in 1..7");
  return InfiniteSet::arithmetic(static_cast<Index>(i), 7);
}

InfiniteSet SevenPartition::tail_pieces() const {
  // 6, 7, 13, 14, 20, 21, ...
  return InfiniteSet([](Index j) { return j % 2 == 1 ? 6 + 7 * ((j - 1) / 2) : 7 * (j / 2); },
                     [](Index k) { return k % 7 == 6 || k % 7 == 0; }, "S6uS7");
}

IndexRange tri_block(Index i) {
  if (i == 0) throw Error("tri_block: i must be >= 1");
  return {triangular(i - 1) + 1, triangular(i)};
}

std::pair<Index, Index> tri_locate(Index c) {
  if (c == 0) throw Error("tri_locate: index must be positive");
  auto i = static_cast<Index>((std::sqrt(8.0 * static_cast<double>(c)) - 1.0) / 2.0);
  while (i > 0 && triangular(i) >= c) --i;
  while (triangular(i + 1) < c) ++i;
  // c lies in block i+1.
  return {i + 1, c - triangular(i)};
}

namespace {

// Lazily enumerates base n filter, memoizing found elements.
class FilteredEnumerator {
 public:
  FilteredEnumerator(InfiniteSet base, InfiniteSet filter, std::uint64_t probe_bound)
      : base_(std::move(base)), filter_(std::move(filter)), probe_bound_(probe_bound) {}

  Index nth(Index j) {
    std::lock_guard lock(mu_);
    while (found_.size() < j) {
      std::uint64_t probes = 0;
      for (;;) {
        Index candidate = base_.nth(cursor_++);
        if (filter_.contains(candidate)) {
          found_.push_back(candidate);
          break;
        }
        if (++probes >= probe_bound_) {
          throw EnumerationStall("enumeration stall: " + base_.label() + " n " + filter_.label() +
                                 " produced no element #" + std::to_string(found_.size() + 1) + " within " +
                                 std::to_string(probe_bound_) + " probes");
        }
      }
    }
    return found_[j - 1];
  }

 private:
  InfiniteSet base_;
  InfiniteSet filter_;
  std::uint64_t probe_bound_;
  std::mutex mu_;
  std::vector<Index> found_;
  Index cursor_ = 1;
};

}  // namespace

std::vector<InfiniteSet> nested_refine(const std::vector<InfiniteSet>& family, std::size_t depth,
                                       std::uint64_t probe_bound) {
  if (family.empty() || depth == 0) return {};
  std::vector<InfiniteSet> bars;
  bars.push_back(family.front());
  for (std::size_t j = 1; j < depth && j < family.size(); ++j) {
    const InfiniteSet prev = bars.back();
    const InfiniteSet next = family[j];
    auto enumerator = std::make_shared<FilteredEnumerator>(prev, next, probe_bound);
    InfiniteSet bar([enumerator](Index k) { return enumerator->nth(k); },
                    [prev, next](Index k) { return prev.contains(k) && next.contains(k); },
                    "(" + prev.label() + " n " + next.label() + ")");
    bar.nth(1);
    bars.push_back(std::move(bar));
  }
  return bars;
}

InfiniteSet remove_finite(const InfiniteSet& base, const IndexSet& removed) {
  std::vector<Index> ranks;
  for (Index r : removed) {
    if (auto pos = base.position(r)) ranks.push_back(*pos);
  }
  std::sort(ranks.begin(), ranks.end());
  IndexSet gone(removed);
  std::string label = base.label();
  if (!ranks.empty()) label += " minus " + std::to_string(ranks.size()) + " points";
  return InfiniteSet(
      [base, ranks](Index j) {
        Index idx = j;
        for (Index r : ranks) {
          if (r <= idx) {
            ++idx;
          } else {
            break;
          }
        }
        return base.nth(idx);
      },
      [base, gone](Index k) { return base.contains(k) && !gone.count(k); }, std::move(label));
}

std::vector<InfiniteSet> disjointify(const std::vector<InfiniteSet>& deltas, const OverlapFn& overlaps,
                                     std::size_t check_count) {
  std::vector<InfiniteSet> bars;
  for (std::size_t j = 0; j < deltas.size(); ++j) {
    IndexSet removed;
    for (std::size_t i = 0; i < j; ++i) {
      IndexSet stated = overlaps(i + 1, j + 1);
      for (Index x : stated) {
        if (!deltas[i].contains(x) || !deltas[j].contains(x)) {
          throw PreconditionViolation("disjointify: overlap(" + std::to_string(i + 1) + "," +
                                      std::to_string(j + 1) + ") lists " + std::to_string(x) +
                                      " which is not a common element");
        }
      }
      for (std::size_t c = 1; c <= check_count; ++c) {
        Index x = deltas[j].nth(c);
        if (deltas[i].contains(x) && !stated.count(x)) {
          throw PreconditionViolation("disjointify: overlap(" + std::to_string(i + 1) + "," +
                                      std::to_string(j + 1) + ") is incomplete, missing " + std::to_string(x));
        }
      }
      removed.insert(stated.begin(), stated.end());
    }
    bars.push_back(remove_finite(deltas[j], removed));
  }
  return bars;
}

InfiniteSet pairing_slice(const InfiniteSet& base, Index j) {
  return InfiniteSet([base, j](Index k) { return base.nth(cantor_pair(j, k)); },
                     [base, j](Index x) {
                       auto pos = base.position(x);
                       return pos && cantor_unpair(*pos).first == j;
                     },
                     base.label() + "[slice " + std::to_string(j) + "]");
}

}  // namespace rowfin
