#include "rowfin/equivalence.hpp"

#include "rowfin/errors.hpp"
#include "rowfin/sandwich.hpp"

#include <algorithm>
#include <mutex>

namespace rowfin {

MembershipResult preorder_membership(const RowFiniteMap& f, const Preorder& rho, Window w,
                                     std::size_t max_violations) {
  MembershipResult out;
  for (Index a = 1; a <= w.n; ++a) {
    for (const auto& [b, v] : f.row(a)) {
      if (rho.rel(a, b)) continue;
      out.member = false;
      if (out.violations.size() < max_violations) out.violations.emplace_back(a, b);
    }
  }
  return out;
}

std::string to_string(Verdict v) { return v == Verdict::DClass ? "DClass" : "EClass"; }

Classification classify_preorder(const Preorder& rho, const SpotCheckBounds& bounds) {
  auto problems = spot_check(rho, bounds);
  if (!problems.empty()) {
    std::string msg = "classify: descriptor " + rho.name() + " is inconsistent: " + problems.front();
    if (problems.size() > 1) msg += " (+" + std::to_string(problems.size() - 1) + " more)";
    throw PreconditionViolation(msg);
  }
  const Support& tag = rho.infinite_upset_indices();
  return Classification{is_finite(tag) ? Verdict::DClass : Verdict::EClass, tag};
}

namespace {

// Position j with anchor(j) == alpha; anchors must increase strictly.
std::optional<Index> anchor_position(const std::function<Index(Index)>& anchor, Index alpha) {
  Index prev = 0;
  for (Index j = 1;; ++j) {
    const Index a = anchor(j);
    if (a <= prev) {
      throw PreconditionViolation("refinement anchors are not increasing at j=" + std::to_string(j));
    }
    if (a == alpha) return j;
    if (a > alpha) return std::nullopt;
    prev = a;
  }
}

// Greedy distinct choices beta_j = least unused element of bars(j).
class GreedyBeta {
 public:
  explicit GreedyBeta(std::function<InfiniteSet(Index)> bars) : bars_(std::move(bars)) {}

  Index at(Index j) {
    std::lock_guard lock(mu_);
    extend_to(j);
    return beta_[j - 1];
  }

  /// j with beta_j == b.
  std::optional<Index> position(Index b) {
    std::lock_guard lock(mu_);
    while (beta_.empty() || beta_.back() < b) extend_to(beta_.size() + 1);
    auto it = std::lower_bound(beta_.begin(), beta_.end(), b);
    if (it == beta_.end() || *it != b) return std::nullopt;
    return static_cast<Index>(it - beta_.begin()) + 1;
  }

 private:
  void extend_to(Index j) {
    while (beta_.size() < j) {
      const Index next = beta_.size() + 1;
      const InfiniteSet bar = bars_(next);
      Index pick = 0;
      for (Index r = 1;; ++r) {
        const Index c = bar.nth(r);
        if (!std::binary_search(beta_.begin(), beta_.end(), c)) {
          pick = c;
          break;
        }
      }
      if (!beta_.empty() && pick <= beta_.back()) {
        throw VerificationFailure("nested bars: greedy choice " + std::to_string(pick) + " at j=" +
                                  std::to_string(next) + " does not exceed " + std::to_string(beta_.back()));
      }
      beta_.push_back(pick);
    }
  }

  std::function<InfiniteSet(Index)> bars_;
  std::mutex mu_;
  std::vector<Index> beta_;
};

}  // namespace

EquivWitness eclass_witness(const Ring& ring, const Preorder& rho, const SpotCheckBounds& bounds) {
  if (classify_preorder(rho, bounds).verdict != Verdict::EClass) {
    throw PreconditionViolation("eclass_witness: " + rho.name() + " is in the D-class");
  }
  if (!rho.refinement()) throw PreconditionViolation("eclass_witness: " + rho.name() + " carries no refinement");
  const Refinement ref = *rho.refinement();
  const auto anchor = ref.anchor;

  RowFiniteMap g = rf_index_map(
      ring, [anchor](Index j) -> std::optional<Index> { return anchor(j); }, "g");

  if (ref.branch == RefinementBranch::Nested) {
    auto beta = std::make_shared<GreedyBeta>(ref.bars);
    RowFiniteMap h = rf_index_map(
        ring, [beta](Index b) { return beta->position(b); }, "h");
    auto lift = [ring, anchor, beta](const RowFiniteMap& Y, Window w) {
      if (auto bad = first_below_diagonal(Y, w)) {
        throw PreconditionViolation("lift: target is not upper-triangular, entry (" + std::to_string(bad->first) + "," +
                                    std::to_string(bad->second) + ")");
      }
      return rf_from_rows(
          ring,
          [ring, anchor, beta, Y](Index alpha) -> FinVec {
            auto j = anchor_position(anchor, alpha);
            if (!j) return {};
            std::vector<FinVec::Entry> out;
            for (const auto& [k, v] : Y.row(*j)) {
              if (k >= *j) out.emplace_back(beta->at(k), v);
            }
            return FinVec(ring, std::move(out));
          },
          "lift(" + Y.tag() + ")");
    };
    return EquivWitness{ref.branch, rho, g, h, anchor, lift};
  }

  const auto locate = ref.locate;
  const auto bars = ref.bars;
  RowFiniteMap h = rf_index_map(
      ring,
      [locate](Index b) -> std::optional<Index> {
        auto jk = locate(b);
        if (!jk) return std::nullopt;
        return jk->second;
      },
      "h");
  auto lift = [ring, anchor, bars](const RowFiniteMap& F, Window) {
    return rf_from_rows(
        ring,
        [ring, anchor, bars, F](Index alpha) -> FinVec {
          auto j = anchor_position(anchor, alpha);
          if (!j) return {};
          const InfiniteSet bar = bars(*j);
          std::vector<FinVec::Entry> out;
          for (const auto& [k, v] : F.row(*j)) out.emplace_back(bar.nth(k), v);
          return FinVec(ring, std::move(out));
        },
        "lift(" + F.tag() + ")");
  };
  return EquivWitness{ref.branch, rho, g, h, anchor, lift};
}

CheckList verify_lift(const EquivWitness& ew, const RowFiniteMap& target, const RowFiniteMap& lifted, Window w) {
  CheckList checks;
  const Ring& ring = target.ring();
  checks.add("g s' h = target", rf_equal_on_window(rf_compose_all({ew.g, lifted, ew.h}), target, w), ring);
  const Window rows(ew.anchor(w.n));
  auto m = preorder_membership(lifted, ew.rho, rows);
  std::string detail;
  if (!m.member) {
    detail = "entry (" + std::to_string(m.violations.front().first) + "," +
             std::to_string(m.violations.front().second) + ") outside " + ew.rho.name();
  }
  checks.add("s' in E(" + ew.rho.name() + ")", m.member, detail);
  return checks;
}

}  // namespace rowfin
