#include "support.hpp"

#include "rowfin/errors.hpp"
#include "rowfin/fearing.hpp"
#include "rowfin/twogen.hpp"

using namespace rowfin;

namespace {

std::vector<FearingDescriptor> finite_descriptors(const Ring& r) {
  return {FearingDescriptor::diagonal(r), FearingDescriptor::banded(r),
          FearingDescriptor::from_preorder(r, Preorder::parse("union-finite:{(1,5)}")),
          FearingDescriptor::from_preorder(r, Preorder::greater_equal())};
}

}  // namespace

TEST_CASE("descriptor membership") {
  const Ring r = Ring::prime_field(3);
  const FearingDescriptor D = FearingDescriptor::diagonal(r);
  CHECK(D.member_on_window(rf_scalar(r, r.from_int(2)), Window(20)));
  CHECK_FALSE(D.member_on_window(rf_shift(r), Window(20)));
  CHECK(D.first_violation(rf_shift(r), Window(20)) == std::pair<Index, Index>{1, 2});
  const FearingDescriptor band = FearingDescriptor::banded(r);
  CHECK(band.member_on_window(rf_shift(r), Window(20)));
  CHECK_FALSE(band.member_on_window(rf_matrix_unit(r, 2, 5), Window(20)));
  CHECK(std::get<IndexSet>(band.supp(3)) == IndexSet{1, 2, 3, 4, 5, 6});
}

TEST_CASE("samples are members and deterministic") {
  const Ring r = Ring::prime_field(3);
  for (const auto& S : finite_descriptors(r)) {
    CAPTURE(S.name);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const RowFiniteMap f = S.sample(seed);
      CHECK(S.member_on_window(f, Window(40)));
      CHECK(rf_equal_on_window(f, S.sample(seed), Window(40)));
    }
  }
  const FearingDescriptor star = FearingDescriptor::from_preorder(r, Preorder::star(2));
  for (std::uint64_t seed = 1; seed <= 10; ++seed) CHECK(star.member_on_window(star.sample(seed), Window(30)));
}

TEST_CASE("splitting a weakly fearing descriptor") {
  const Ring r = Ring::prime_field(3);
  const WeakFearSplit d = split_weak_fearing(FearingDescriptor::diagonal(r));
  CHECK(d.sigma.empty());
  const FearingDescriptor S = FearingDescriptor::from_preorder(r, Preorder::star(1));
  const WeakFearSplit split = split_weak_fearing(S);
  CHECK(split.sigma == IndexSet{1});
  testing::require_pass(verify_split(split, S, 5, Window(12)));
  CHECK(testing::any_failure(verify_split(split, S, 2, Window(12), 1, [](TwoGenWitness& tg) {
    tg.f3 = rf_add(tg.f3, rf_matrix_unit(tg.ring, 2, 1));
  })));
  CHECK_THROWS_AS(split_weak_fearing(FearingDescriptor::from_preorder(r, Preorder::less_equal())), PreconditionViolation);
}

TEST_CASE("lower-triangular embedding") {
  const Ring r = Ring::prime_field(3);
  const LowerEmbed d = fear_lower_embed(FearingDescriptor::diagonal(r));
  for (Index k = 1; k <= 30; ++k) CHECK(d.level(k) == k);
  CHECK(rf_equal_on_window(d.f, rf_identity(r), Window(30)));
  CHECK(rf_equal_on_window(d.g, rf_identity(r), Window(30)));

  const LowerEmbed band = fear_lower_embed(FearingDescriptor::banded(r));
  for (Index k = 1; k <= 30; ++k) CHECK(band.level(k) == 2 * k);

  // supp(1) = {1,5} makes l_1..l_5 all equal 5; levels must still increase.
  const LowerEmbed rep = fear_lower_embed(FearingDescriptor::from_preorder(r, Preorder::parse("union-finite:{(1,5)}")));
  const std::vector<Index> expected{5, 6, 7, 8, 9, 10, 11};
  for (Index k = 1; k <= 7; ++k) CHECK(rep.level(k) == expected[k - 1]);

  for (const auto& S : finite_descriptors(r)) {
    CAPTURE(S.name);
    testing::require_pass(verify_lower_embed(fear_lower_embed(S), S, 5, Window(24)));
  }
  CHECK_THROWS_AS(fear_lower_embed(FearingDescriptor::from_preorder(r, Preorder::star(1))), PreconditionViolation);
}

TEST_CASE("fear witness escapes every cover") {
  const Ring r = Ring::prime_field(3);
  const Environment U{{"s", rf_shift(r)}};
  const FearWitness fw = fear_witness(FearingDescriptor::diagonal(r), U, 8);
  REQUIRE(fw.steps.size() == 8);
  testing::require_pass(verify_fear_witness(fw));
  for (std::size_t j = 0; j < fw.steps.size(); ++j) {
    const FearStep& st = fw.steps[j];
    CHECK_FALSE(st.cover.count(st.escape));
    CHECK(rf_apply(st.x, fw.g) == st.y);
    // Under D and the shift, the radius-j ball from e_m is {m, ..., m+j}.
    IndexSet ball;
    for (Index k = st.m; k <= st.m + j + 1; ++k) ball.insert(k);
    CHECK(st.cover == ball);
    if (j) CHECK(st.m > fw.steps[j - 1].escape);
  }
  FearWitness bad = fw;
  bad.g = rf_add(bad.g, rf_matrix_unit(r, fw.steps[0].m, fw.steps[0].m));
  CHECK(testing::any_failure(verify_fear_witness(bad)));
}

TEST_CASE("fear witness for a banded descriptor with two maps") {
  const Ring r = Ring::prime_field(5);
  std::mt19937_64 rng(3);
  const Environment U{{"a", rf_random_finite(r, rng, 20, 20, 0.1)}, {"s", rf_shift(r)}};
  testing::require_pass(verify_fear_witness(fear_witness(FearingDescriptor::banded(r), U, 3)));
}

TEST_CASE("diagonal representatives") {
  const Ring r = Ring::prime_field(2);
  const Environment env = diagonal_representatives(r, {3, 4});
  CHECK(env.size() == 4);
  CHECK(env.count("d0000"));
  CHECK(env.count("d0003"));
  for (const auto& [name, d] : env) {
    for (Index a = 1; a <= 6; ++a) {
      if (a != 3 && a != 4) CHECK(d.row(a).empty());
      for (const auto& [b, v] : d.row(a)) CHECK(b == a);
    }
  }
  CHECK_THROWS_AS(diagonal_representatives(Ring::prime_field(3), {1, 2, 3, 4, 5, 6, 7, 8}, 100), BoundExceeded);
}

TEST_CASE("brute-force proximity confirms the first escapes") {
  const Ring r = Ring::prime_field(2);
  const Environment U{{"s", rf_shift(r)}};
  const FearWitness fw = fear_witness(FearingDescriptor::diagonal(r), U, 2);
  testing::require_pass(confirm_fear_by_oracle(fw, U, r, 2));
  CHECK_THROWS_AS(confirm_fear_by_oracle(fw, U, r, 2, 10), BoundExceeded);
}
