#include "rowfin/sandwich.hpp"

#include "rowfin/errors.hpp"

namespace rowfin {

RowFiniteMap sandwich_A(const Ring& ring) {
  return rf_from_rows(
      ring,
      [ring](Index i) {
        const IndexRange block = tri_block(i);
        std::vector<FinVec::Entry> out;
        for (Index c = block.first; c <= block.last; ++c) out.emplace_back(c, ring.one());
        return FinVec(ring, std::move(out));
      },
      "A");
}

RowFiniteMap sandwich_B(const Ring& ring) {
  return rf_index_map(
      ring, [](Index c) -> std::optional<Index> { return tri_locate(c).second; }, "B");
}

std::optional<std::pair<Index, Index>> first_above_diagonal(const RowFiniteMap& f, Window w) {
  for (Index i = 1; i <= w.n; ++i) {
    const FinVec& row = f.row(i);
    if (!row.empty() && row.max_index() > i) {
      for (const auto& [c, v] : row) {
        if (c > i) return std::pair{i, c};
      }
    }
  }
  return std::nullopt;
}

std::optional<std::pair<Index, Index>> first_below_diagonal(const RowFiniteMap& f, Window w) {
  for (Index i = 1; i <= w.n; ++i) {
    const FinVec& row = f.row(i);
    if (!row.empty() && row.begin()->first < i) return std::pair{i, row.begin()->first};
  }
  return std::nullopt;
}

RowFiniteMap sandwich_X(const RowFiniteMap& Y, Window lower_check) {
  if (auto bad = first_above_diagonal(Y, lower_check)) {
    throw PreconditionViolation("sandwich_X: Y is not lower-triangular, entry (" + std::to_string(bad->first) + "," +
                                std::to_string(bad->second) + ")");
  }
  const Ring ring = Y.ring();
  return rf_from_rows(
      ring,
      [ring, Y](Index c) -> FinVec {
        auto [i, k] = tri_locate(c);
        const Element* a = Y.row(i).find(k);
        if (!a) return {};
        return FinVec::single(ring, c, *a);
      },
      "X(" + Y.tag() + ")");
}

CheckList verify_sandwich(const RowFiniteMap& Y, const RowFiniteMap& X, Window w) {
  CheckList checks;
  const Ring& ring = Y.ring();
  const RowFiniteMap A = sandwich_A(ring);
  const RowFiniteMap B = sandwich_B(ring);
  checks.add("AXB = Y", rf_equal_on_window(rf_compose_all({A, X, B}), Y, w), ring);
  // X is read on every coordinate A touches in the window.
  const Window xw(triangular(w.n));
  std::string offdiag;
  for (Index c = 1; c <= xw.n && offdiag.empty(); ++c) {
    for (const auto& [col, v] : X.row(c)) {
      if (col != c) {
        offdiag = "entry (" + std::to_string(c) + "," + std::to_string(col) + ")";
        break;
      }
    }
  }
  checks.add("X diagonal", offdiag.empty(), offdiag);
  return checks;
}

TriangularSplit upper_equiv_decompose(const RowFiniteMap& f) {
  const Ring ring = f.ring();
  auto part = [ring, f](bool lower) {
    return [ring, f, lower](Index i) {
      std::vector<FinVec::Entry> out;
      for (const auto& [c, v] : f.row(i)) {
        if ((c <= i) == lower) out.emplace_back(c, v);
      }
      return FinVec(ring, std::move(out));
    };
  };
  return TriangularSplit{rf_from_rows(ring, part(true), "lower(" + f.tag() + ")"),
                         rf_from_rows(ring, part(false), "upper(" + f.tag() + ")")};
}

}  // namespace rowfin
