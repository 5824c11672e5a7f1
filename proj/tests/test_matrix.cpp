#include "support.hpp"

#include "rowfin/errors.hpp"
#include "rowfin/matrix.hpp"
#include "rowfin/sandwich.hpp"

#include <sstream>

using namespace rowfin;
using testing::Dense;

namespace {

FinVec vec(const Ring& r, std::initializer_list<std::pair<Index, long long>> entries) {
  std::vector<FinVec::Entry> e;
  for (auto [i, v] : entries) e.emplace_back(i, r.from_int(v));
  return FinVec(r, e);
}

}  // namespace

TEST_CASE("finite vectors") {
  const Ring z5 = Ring::integers_mod(5);
  const FinVec x = vec(z5, {{7, 1}, {2, 3}, {4, 0}});
  CHECK(x.size() == 2);
  CHECK(x.support() == IndexSet{2, 7});
  CHECK(x.max_index() == 7);
  CHECK_THROWS(vec(z5, {{1, 1}, {1, 2}}));
  CHECK(vec_add(z5, x, vec_neg(z5, x)).empty());
  CHECK(format_vec(z5, x) == "{2:3, 7:1}");
  CHECK(parse_vec(z5, format_vec(z5, x)) == x);
  CHECK(parse_vec(z5, "{}").empty());
  CHECK(parse_vec(z5, "2:3,7:1") == x);
  CHECK_THROWS_AS(parse_vec(z5, "{2:}"), ParseError);
  const Ring m = Ring::parse("Mat:2:GF:2");
  const FinVec y = FinVec::single(m, 3, m.matrix_unit(0, 1));
  CHECK(parse_vec(m, format_vec(m, y)) == y);
}

TEST_CASE("basic maps") {
  const Ring zz = Ring::integers();
  const RowFiniteMap evens = rf_projection(zz, [](Index a) { return a % 2 == 0; }, "evens");
  CHECK(evens.row(3).empty());
  CHECK(evens.row(4) == FinVec::unit(zz, 4));
  CHECK(rf_matrix_unit(zz, 2, 5).row(2) == FinVec::unit(zz, 5));
  CHECK(rf_matrix_unit(zz, 2, 5).row(1).empty());
  CHECK(rf_pow(rf_shift(zz), 3).row(1) == FinVec::unit(zz, 4));
  CHECK(rf_pow(rf_shift(zz), 0).row(9) == FinVec::unit(zz, 9));
}

TEST_CASE("sums and products of matrix units") {
  const Ring zz = Ring::integers();
  const Window w(20);
  std::mt19937_64 rng(3);
  const RowFiniteMap f = rf_random_finite(zz, rng, 20, 20, 0.3);
  const auto zero_sum = rf_add(f, rf_neg(f));
  for (Index a = 1; a <= 20; ++a) CHECK(zero_sum.row(a).empty());

  const Ring gf2 = Ring::prime_field(2);
  CHECK(rf_add(rf_matrix_unit(gf2, 1, 2), rf_matrix_unit(gf2, 1, 2)).row(1).empty());
  CHECK(rf_equal_on_window(rf_compose(rf_matrix_unit(zz, 1, 2), rf_matrix_unit(zz, 2, 3)), rf_matrix_unit(zz, 1, 3), w));
  CHECK(rf_equal_on_window(rf_compose(rf_matrix_unit(zz, 1, 2), rf_matrix_unit(zz, 3, 4)), rf_zero(zz), w));
}

TEST_CASE("vector action") {
  const Ring zz = Ring::integers();
  CHECK(rf_apply(FinVec::unit(zz, 2), sandwich_A(zz)) == vec(zz, {{2, 1}, {3, 1}}));
  CHECK(rf_apply(FinVec{}, rf_shift(zz)).empty());
  CHECK(rf_apply(vec(zz, {{1, 1}, {2, 1}}), rf_matrix_unit(zz, 2, 3)) == FinVec::unit(zz, 3));
  CHECK_THROWS_AS(rf_apply(Ring::integers_mod(3), FinVec::unit(zz, 1), rf_shift(zz)), RingMismatch);
}

TEST_CASE("window comparison") {
  const Ring zz = Ring::integers();
  const RowFiniteMap id = rf_identity(zz);
  CHECK(rf_equal_on_window(id, id, Window(30)));
  const auto cmp = rf_equal_on_window(id, rf_zero(zz), Window(1));
  CHECK_FALSE(cmp.equal);
  REQUIRE(cmp.first);
  CHECK(cmp.first->row == 1);
  const RowFiniteMap evens1 = rf_projection(zz, [](Index a) { return a % 2 == 0; });
  const RowFiniteMap evens2 = rf_sub(id, rf_projection(zz, [](Index a) { return a % 2 == 1; }));
  CHECK(rf_equal_on_window(evens1, evens2, Window(50)));
}

TEST_CASE("dense snapshots") {
  const Ring zz = Ring::integers();
  const auto I = rf_window(rf_identity(zz), Window(3));
  REQUIRE(I.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) CHECK(zz.is_one(I[i][j]) == (i == j));
  }
  const auto A = rf_window(sandwich_A(zz), Window(3));
  REQUIRE(A[2].size() == 6);
  const std::vector<std::vector<int>> expected{{1, 0, 0, 0, 0, 0}, {0, 1, 1, 0, 0, 0}, {0, 0, 0, 1, 1, 1}};
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 6; ++j) CHECK(zz.is_one(A[i][j]) == (expected[i][j] == 1));
  }
  CHECK(rf_row_support(sandwich_A(zz), 4) == IndexSet{7, 8, 9, 10});
  CHECK(rf_row_support(rf_zero(zz), 4).empty());
}

TEST_CASE("sparse triples") {
  const Ring zz = Ring::integers();
  CHECK(rf_equal_on_window(rf_from_sparse(zz, {{1, 2, "1"}}), rf_matrix_unit(zz, 1, 2), Window(10)));
  CHECK(rf_equal_on_window(rf_from_sparse(zz, {}), rf_zero(zz), Window(10)));
  const auto triples = rf_to_sparse(sandwich_A(zz), Window(10));
  CHECK(triples.size() == triangular(10));
  const auto file = read_sparse_text(write_sparse(zz, triples));
  CHECK(file.ring == zz);
  CHECK(file.triples == triples);
  CHECK(rf_to_sparse(rf_from_sparse(zz, file.triples), Window(10)) == triples);
  CHECK_THROWS_AS(rf_from_sparse(zz, {{1, 2, "1"}, {1, 2, "3"}}), ParseError);
  CHECK_THROWS_AS(rf_from_sparse(zz, {{1, 2, "z"}}), ParseError);
  CHECK_THROWS_AS(read_sparse_text("1 2 3\n"), ParseError);
  CHECK_THROWS_AS(read_sparse_text("ring GF:4\n"), ParseError);
  const auto commented = read_sparse_text("# note\nring Zmod:6\n\n2 3 5\n");
  CHECK(commented.triples == std::vector<SparseTriple>{{2, 3, "5"}});
}

TEST_CASE("composition agrees with dense multiplication") {
  std::mt19937_64 rng(17);
  for (std::int64_t mod : {6, 5}) {
    const Ring r = mod == 6 ? Ring::integers_mod(6) : Ring::prime_field(5);
    for (int t = 0; t < 25; ++t) {
      const RowFiniteMap f = rf_random_finite(r, rng, 15, 15, 0.3);
      const RowFiniteMap g = rf_random_finite(r, rng, 15, 15, 0.3);
      const RowFiniteMap h = rf_random_finite(r, rng, 15, 15, 0.3);
      const Dense F = testing::to_dense(f, 15, 15), G = testing::to_dense(g, 15, 15);
      CHECK(testing::to_dense(rf_compose(f, g), 15, 15) == testing::dense_mul(F, G, mod));
      CHECK(rf_equal_on_window(rf_compose(rf_compose(f, g), h), rf_compose(f, rf_compose(g, h)), Window(15)));
      CHECK(rf_equal_on_window(rf_compose(f, rf_add(g, h)), rf_add(rf_compose(f, g), rf_compose(f, h)), Window(15)));
      CHECK(rf_equal_on_window(rf_compose(rf_identity(r), f), f, Window(15)));
    }
  }
}

TEST_CASE("composition order in a noncommutative ring") {
  const Ring m = Ring::parse("Mat:2:GF:2");
  const RowFiniteMap f = rf_scalar(m, m.matrix_unit(0, 1));
  const RowFiniteMap g = rf_scalar(m, m.matrix_unit(1, 0));
  CHECK(*rf_compose(f, g).row(1).find(1) == m.matrix_unit(0, 0));
  CHECK(*rf_compose(g, f).row(1).find(1) == m.matrix_unit(1, 1));
}

TEST_CASE("random triangular samplers stay in shape") {
  const Ring r = Ring::prime_field(5);
  std::mt19937_64 rng(5);
  const auto lo = rf_random_lower(r, rng, 20, 0.5);
  const auto up = rf_random_upper(r, rng, 20, 0.5);
  CHECK_FALSE(first_above_diagonal(lo, Window(30)));
  CHECK_FALSE(first_below_diagonal(up, Window(30)));
  CHECK(lo.row(21).empty());
}

TEST_CASE("memoized rows are computed once") {
  const Ring zz = Ring::integers();
  const RowFiniteMap s = rf_shift(zz);
  s.row(3);
  s.row(3);
  CHECK(s.rows_computed() == 1);
}
