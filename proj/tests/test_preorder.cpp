#include "support.hpp"

#include "rowfin/errors.hpp"
#include "rowfin/preorder.hpp"

using namespace rowfin;

namespace {

std::vector<Preorder> catalogue() {
  return {Preorder::parse("diag"),           Preorder::parse("le"),
          Preorder::parse("ge"),             Preorder::parse("full"),
          Preorder::parse("mod:2:{(1,0)}"),  Preorder::parse("mod:3:{(0,1),(1,2)}"),
          Preorder::parse("union-finite:{(1,5)}"), Preorder::parse("union-finite:{(1,2),(2,3)}"),
          Preorder::star(3)};
}

}  // namespace

TEST_CASE("descriptor DSL") {
  CHECK(Preorder::parse("le").name() == "le");
  CHECK(Preorder::parse(" ge ").name() == "ge");
  CHECK(Preorder::parse("mod:2:(1,0)").rel(3, 4));
  CHECK_FALSE(Preorder::parse("mod:2:(1,0)").rel(4, 3));
  CHECK(Preorder::parse("union-finite:{(1,2),(2,3)}").rel(1, 3));
  CHECK_FALSE(Preorder::parse("union-finite:{(1,2),(2,3)}").rel(3, 1));
  CHECK_THROWS_AS(Preorder::parse("lt"), ParseError);
  CHECK_THROWS_AS(Preorder::parse("mod:x:{}"), ParseError);
  CHECK_THROWS_AS(Preorder::parse("mod:2:{(1,2)}"), ParseError);
  CHECK_THROWS_AS(Preorder::parse("union-finite:{(0,1)}"), ParseError);
  CHECK_THROWS_AS(Preorder::parse("union-finite:{(1,2"), ParseError);
  CHECK_THROWS_AS(Preorder::parse("union-finite:{(1,2,3)}"), ParseError);
  CHECK_THROWS_AS(Preorder::parse("union-finite:(1,2)(3"), ParseError);
  CHECK(Preorder::parse("union-finite:{ (1,2) , (2,3) }").rel(1, 3));
  CHECK(Preorder::parse("union-finite:{}").name() == "union-finite:{}");
}

TEST_CASE("catalogue descriptors are consistent") {
  for (const Preorder& rho : catalogue()) {
    CAPTURE(rho.name());
    CHECK(spot_check(rho).empty());
  }
}

TEST_CASE("reflexive and transitive on a finite range") {
  for (const Preorder& rho : catalogue()) {
    CAPTURE(rho.name());
    for (Index a = 1; a <= 18; ++a) {
      CHECK(rho.rel(a, a));
      for (Index b = 1; b <= 18; ++b) {
        for (Index c = 1; c <= 18; ++c) {
          if (rho.rel(a, b) && rho.rel(b, c)) CHECK(rho.rel(a, c));
        }
      }
    }
  }
}

TEST_CASE("up-sets and their finiteness tags") {
  CHECK(std::get<IndexSet>(Preorder::greater_equal().upset(4)) == IndexSet{1, 2, 3, 4});
  CHECK(std::get<InfiniteSet>(Preorder::less_equal().upset(4)).nth(1) == 4);
  CHECK(std::get<IndexSet>(Preorder::diagonal().upset(7)) == IndexSet{7});
  CHECK(std::get<IndexSet>(Preorder::parse("union-finite:{(1,5)}").upset(1)) == IndexSet{1, 5});
  const Preorder m = Preorder::parse("mod:2:{(1,0)}");
  CHECK(std::get<InfiniteSet>(m.upset(3)).prefix(4) == std::vector<Index>{2, 3, 4, 6});
  CHECK(std::get<IndexSet>(m.upset(4)) == IndexSet{4});
  CHECK(support_contains(m.infinite_upset_indices(), 5));
  CHECK_FALSE(support_contains(m.infinite_upset_indices(), 6));
}

TEST_CASE("refinements") {
  const Preorder le_rho = Preorder::less_equal();
  const auto& le = le_rho.refinement();
  REQUIRE(le);
  CHECK(le->branch == RefinementBranch::Nested);
  const Preorder md_rho = Preorder::parse("mod:2:{(1,0)}");
  const auto& md = md_rho.refinement();
  REQUIRE(md);
  CHECK(md->branch == RefinementBranch::Disjoint);
  CHECK_FALSE(Preorder::greater_equal().refinement());
  CHECK_FALSE(Preorder::diagonal().refinement());
}

TEST_CASE("spot checks catch a wrong tag") {
  const Preorder bad = Preorder::less_equal().with_infinite_tag(IndexSet{});
  CHECK_FALSE(spot_check(bad).empty());
  const Preorder bad2 = Preorder::greater_equal().with_infinite_tag(InfiniteSet::naturals());
  CHECK_FALSE(spot_check(bad2).empty());
}

TEST_CASE("spot checks catch a non-transitive relation") {
  const Preorder broken("broken", [](Index a, Index b) { return a == b || b == a + 1; },
                        [](Index a) -> Support { return IndexSet{a, a + 1}; }, IndexSet{});
  CHECK_FALSE(spot_check(broken).empty());
}
