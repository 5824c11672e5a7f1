#include "rowfin/finite_checks.hpp"

#include "rowfin/errors.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace rowfin {

namespace {

using Mat = std::vector<std::uint64_t>;

class ModP {
 public:
  ModP(std::size_t n, std::uint64_t p) : n_(n), p_(p) {}

  Mat mul(const Mat& a, const Mat& b) const {
    Mat c(n_ * n_, 0);
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t k = 0; k < n_; ++k) {
        const std::uint64_t aik = a[i * n_ + k];
        if (!aik) continue;
        for (std::size_t j = 0; j < n_; ++j) c[i * n_ + j] = (c[i * n_ + j] + aik * b[k * n_ + j]) % p_;
      }
    }
    return c;
  }

  std::uint64_t inverse(std::uint64_t a) const {
    std::uint64_t r = 1;
    for (std::uint64_t e = p_ - 2, b = a; e; e >>= 1, b = b * b % p_) {
      if (e & 1) r = r * b % p_;
    }
    return r;
  }

  std::size_t n() const { return n_; }
  std::uint64_t p() const { return p_; }

 private:
  std::size_t n_;
  std::uint64_t p_;
};

// Reduced row echelon basis of a subspace of GF(p)^(n*n).
class Subspace {
 public:
  explicit Subspace(const ModP& f) : f_(&f) {}

  /// Reduces v against the basis; returns the remainder.
  Mat reduce(Mat v) const {
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const std::uint64_t c = v[pivots_[r]];
      if (!c) continue;
      const std::uint64_t p = f_->p();
      for (std::size_t k = 0; k < v.size(); ++k) v[k] = (v[k] + (p - c) * rows_[r][k]) % p;
    }
    return v;
  }

  bool contains(const Mat& v) const { return is_zero(reduce(v)); }

  /// Adds v; returns false when v was already in the span.
  bool insert(const Mat& v) {
    Mat r = reduce(v);
    if (is_zero(r)) return false;
    std::size_t piv = 0;
    while (!r[piv]) ++piv;
    const std::uint64_t p = f_->p();
    const std::uint64_t inv = f_->inverse(r[piv]);
    for (auto& x : r) x = x * inv % p;
    for (auto& row : rows_) {
      const std::uint64_t c = row[piv];
      if (!c) continue;
      for (std::size_t k = 0; k < row.size(); ++k) row[k] = (row[k] + (p - c) * r[k]) % p;
    }
    auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), piv) - pivots_.begin();
    pivots_.insert(pivots_.begin() + pos, piv);
    rows_.insert(rows_.begin() + pos, std::move(r));
    return true;
  }

  const std::vector<Mat>& basis() const { return rows_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }
  std::size_t dim() const { return rows_.size(); }

  Mat key() const {
    Mat k;
    for (const auto& r : rows_) k.insert(k.end(), r.begin(), r.end());
    return k;
  }

 private:
  static bool is_zero(const Mat& v) {
    for (auto x : v) {
      if (x) return false;
    }
    return true;
  }

  const ModP* f_;
  std::vector<Mat> rows_;
  std::vector<std::size_t> pivots_;
};

// Smallest subring containing the span: close under products of basis pairs.
Subspace ring_closure(Subspace s, const ModP& f) {
  bool grew = true;
  while (grew) {
    grew = false;
    const auto basis = s.basis();
    for (const auto& a : basis) {
      for (const auto& b : basis) grew = s.insert(f.mul(a, b)) || grew;
    }
  }
  return s;
}

}  // namespace

SimpleFullReport simple_full_check(std::size_t n, std::uint64_t p) {
  if (n == 0) throw PreconditionViolation("simple_full_check: n must be positive");
  if (!is_prime(p)) throw PreconditionViolation("simple_full_check: " + std::to_string(p) + " is not prime");
  std::uint64_t elements = 1;
  for (std::size_t i = 0; i < n * n; ++i) {
    elements *= p;
    if (elements > (1u << 16)) {
      throw BoundExceeded("simple_full_check: p^(n^2) exceeds 2^16 for n=" + std::to_string(n) +
                          ", p=" + std::to_string(p));
    }
  }
  const ModP f(n, static_cast<std::uint64_t>(p));
  const std::size_t dim = n * n;

  Subspace diag(f);
  for (std::size_t i = 0; i < n; ++i) {
    Mat e(dim, 0);
    e[i * n + i] = 1;
    diag.insert(e);
  }
  std::map<Mat, Subspace> found;
  std::deque<Subspace> queue;
  Subspace start = ring_closure(diag, f);
  found.emplace(start.key(), start);
  queue.push_back(start);

  while (!queue.empty()) {
    Subspace s = std::move(queue.front());
    queue.pop_front();
    // Complement representatives: free values on the non-pivot coordinates.
    std::vector<std::size_t> free_coords;
    for (std::size_t c = 0, r = 0; c < dim; ++c) {
      if (r < s.pivots().size() && s.pivots()[r] == c) {
        ++r;
        continue;
      }
      free_coords.push_back(c);
    }
    std::uint64_t reps = 1;
    for (std::size_t i = 0; i < free_coords.size(); ++i) reps *= p;
    for (std::uint64_t code = 1; code < reps; ++code) {
      Mat m(dim, 0);
      std::uint64_t rest = code;
      for (std::size_t c : free_coords) {
        m[c] = static_cast<std::uint64_t>(rest % p);
        rest /= p;
      }
      Subspace t = s;
      t.insert(m);
      t = ring_closure(std::move(t), f);
      Mat key = t.key();
      if (found.count(key)) continue;
      found.emplace(key, t);
      queue.push_back(std::move(t));
    }
  }

  SimpleFullReport report;
  report.n = n;
  report.p = p;
  std::vector<std::pair<IndexRelation, std::size_t>> rows;
  for (const auto& [key, s] : found) {
    IndexRelation rho;
    for (const auto& b : s.basis()) {
      for (std::size_t c = 0; c < dim; ++c) {
        if (b[c]) rho.emplace(c / n + 1, c % n + 1);
      }
    }
    rows.emplace_back(std::move(rho), s.dim());
  }
  std::sort(rows.begin(), rows.end());
  for (auto& [rho, d] : rows) {
    std::string name = "{";
    for (auto [a, b] : rho) name += "(" + std::to_string(a) + "," + std::to_string(b) + ")";
    name += "}";
    bool reflexive = true;
    for (Index a = 1; a <= n; ++a) reflexive = reflexive && rho.count({a, a});
    bool transitive = true;
    for (auto [a, b] : rho) {
      for (auto [c, e] : rho) {
        if (b == c && !rho.count({a, e})) transitive = false;
      }
    }
    report.checks.add(name + " reflexive", reflexive, "missing a diagonal pair");
    report.checks.add(name + " transitive", transitive, "not closed under composition");
    report.checks.add(name + " subring = E(rho)", d == rho.size(),
                      "dimension " + std::to_string(d) + " vs " + std::to_string(rho.size()) + " positions");
    report.relations.push_back(rho);
    report.dimensions.push_back(d);
  }
  return report;
}

std::vector<IndexRelation> preorders_on(std::size_t n) {
  std::vector<IndexRelation> out;
  const std::size_t cells = n * n;
  if (cells > 20) throw BoundExceeded("preorders_on: n too large for brute force");
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << cells); ++code) {
    auto has = [&](Index a, Index b) { return (code >> ((a - 1) * n + (b - 1))) & 1; };
    bool ok = true;
    for (Index a = 1; a <= n && ok; ++a) ok = has(a, a);
    for (Index a = 1; a <= n && ok; ++a) {
      for (Index b = 1; b <= n && ok; ++b) {
        for (Index c = 1; c <= n && ok; ++c) {
          if (has(a, b) && has(b, c) && !has(a, c)) ok = false;
        }
      }
    }
    if (!ok) continue;
    IndexRelation rho;
    for (Index a = 1; a <= n; ++a) {
      for (Index b = 1; b <= n; ++b) {
        if (has(a, b)) rho.emplace(a, b);
      }
    }
    out.push_back(std::move(rho));
  }
  std::sort(out.begin(), out.end());
  return out;
}

CMembership c_membership(const RowFiniteMap& f, Window w) {
  const Ring& ring = f.ring();
  CMembership out{true, ring.zero(), f, std::nullopt};
  if (w.n >= 2) {
    if (const Element* d = f.row(2).find(2)) out.s = *d;
  }
  out.h = rf_sub(f, rf_scalar(ring, out.s));
  for (Index a = 1; a <= w.n && !out.violation; ++a) {
    const FinVec& row = f.row(a);
    for (const auto& [b, v] : row) {
      if (b == 1) continue;
      if (b != a || v != out.s) {
        out.violation = std::pair{a, b};
        break;
      }
    }
    if (!out.violation && a >= 2 && !ring.is_zero(out.s) && !row.find(a)) out.violation = std::pair{a, a};
  }
  out.member = !out.violation;
  return out;
}

IndexSet column_support(const RowFiniteMap& f, Window w) {
  IndexSet cols;
  for (Index a = 1; a <= w.n; ++a) {
    for (const auto& [b, v] : f.row(a)) cols.insert(b);
  }
  return cols;
}

bool in_finite_columns(const RowFiniteMap& h, Window w, const IndexSet& columns) {
  for (Index a = 1; a <= w.n; ++a) {
    for (const auto& [b, v] : h.row(a)) {
      if (!columns.count(b)) return false;
    }
  }
  return true;
}

}  // namespace rowfin
