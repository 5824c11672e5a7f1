#pragma once

// Shared helpers: check-list assertions and a dense modular matrix oracle
// that shares no arithmetic with the library.

#include "doctest.h"

#include "rowfin/check.hpp"
#include "rowfin/matrix.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace testing {

using Dense = std::vector<std::vector<std::int64_t>>;

inline void require_pass(const rowfin::CheckList& checks) {
  CHECK(checks.size() > 0);
  for (const auto& c : checks.items()) {
    INFO(c.name << ": " << c.detail);
    CHECK(c.pass);
  }
}

inline bool any_failure(const rowfin::CheckList& checks) { return !checks.all_pass(); }

/// rows x cols corner of f, entries read back through their decimal text.
inline Dense to_dense(const rowfin::RowFiniteMap& f, std::size_t rows, std::size_t cols) {
  Dense d(rows, std::vector<std::int64_t>(cols, 0));
  for (std::size_t a = 1; a <= rows; ++a) {
    for (const auto& [b, v] : f.row(a)) {
      REQUIRE(b <= cols);
      d[a - 1][b - 1] = std::stoll(f.ring().format(v));
    }
  }
  return d;
}

inline Dense dense_mul(const Dense& a, const Dense& b, std::int64_t mod) {
  const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  Dense c(n, std::vector<std::int64_t>(m, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t t = 0; t < k; ++t) {
      if (!a[i][t]) continue;
      for (std::size_t j = 0; j < m; ++j) {
        c[i][j] += a[i][t] * b[t][j];
        if (mod) c[i][j] = ((c[i][j] % mod) + mod) % mod;
      }
    }
  }
  return c;
}

inline Dense dense_identity(std::size_t n) {
  Dense d(n, std::vector<std::int64_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 1;
  return d;
}

}  // namespace testing
